#pragma once

#include <gmpxx.h>

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace pkit {

using Integer = mpz_class;
using Rational = mpq_class;

/// Base class for every error the toolkit raises.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Input text does not follow the grammar; carries a 1-based position.
class SyntaxError : public Error {
public:
  SyntaxError(const std::string &msg, int line, int column);
  int line() const { return line_; }
  int column() const { return column_; }

private:
  int line_;
  int column_;
};

/// A computation exceeded its configured budget. Never a wrong answer.
class ResourceLimit : public Error {
public:
  using Error::Error;
};

/// Precondition of an operation does not hold for the given input.
class DomainError : public Error {
public:
  using Error::Error;
};

// Integer helpers. All divisions round toward minus infinity.
Integer floor_div(const Integer &a, const Integer &b);
Integer ceil_div(const Integer &a, const Integer &b);
/// Residue in [0, |n|).
Integer mod(const Integer &a, const Integer &n);
Integer gcd(const Integer &a, const Integer &b);
Integer lcm(const Integer &a, const Integer &b);
bool divides(const Integer &d, const Integer &a);
/// Modular inverse of a mod n; requires gcd(a, n) == 1.
Integer mod_inverse(const Integer &a, const Integer &n);

Rational make_rational(const Integer &num, const Integer &den = 1);
Integer floor(const Rational &r);
Integer ceil(const Rational &r);
bool is_integer(const Rational &r);
Integer num(const Rational &r);
Integer den(const Rational &r);

std::string to_string(const Integer &v);
std::string to_string(const Rational &v);
/// Accepts "p" or "p/q" with optional sign.
Rational parse_rational(std::string_view text);
Integer parse_integer(std::string_view text);

long to_long(const Integer &v);

} // namespace pkit
