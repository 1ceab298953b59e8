#include "pkit/numeric.hpp"

#include <climits>

namespace pkit {

SyntaxError::SyntaxError(const std::string &msg, int line, int column)
    : Error(std::to_string(line) + ":" + std::to_string(column) + ": " + msg),
      line_(line), column_(column) {}

Integer floor_div(const Integer &a, const Integer &b) {
  if (b == 0) throw DomainError("division by zero");
  Integer q;
  mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return q;
}

Integer ceil_div(const Integer &a, const Integer &b) {
  if (b == 0) throw DomainError("division by zero");
  Integer q;
  mpz_cdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return q;
}

Integer mod(const Integer &a, const Integer &n) {
  if (n == 0) throw DomainError("modulus zero");
  Integer r;
  Integer an = abs(n);
  mpz_mod(r.get_mpz_t(), a.get_mpz_t(), an.get_mpz_t());
  return r;
}

Integer gcd(const Integer &a, const Integer &b) {
  Integer g;
  mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return g;
}

Integer lcm(const Integer &a, const Integer &b) {
  Integer l;
  mpz_lcm(l.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return l;
}

bool divides(const Integer &d, const Integer &a) {
  if (d == 0) return a == 0;
  return mpz_divisible_p(a.get_mpz_t(), d.get_mpz_t()) != 0;
}

Integer mod_inverse(const Integer &a, const Integer &n) {
  Integer inv;
  Integer an = abs(n);
  if (an == 1) return 0;
  if (mpz_invert(inv.get_mpz_t(), a.get_mpz_t(), an.get_mpz_t()) == 0)
    throw DomainError("no modular inverse");
  return inv;
}

Rational make_rational(const Integer &n, const Integer &d) {
  Rational r(n, d);
  r.canonicalize();
  return r;
}

Integer floor(const Rational &r) {
  return floor_div(r.get_num(), r.get_den());
}

Integer ceil(const Rational &r) { return ceil_div(r.get_num(), r.get_den()); }

bool is_integer(const Rational &r) { return r.get_den() == 1; }
Integer num(const Rational &r) { return r.get_num(); }
Integer den(const Rational &r) { return r.get_den(); }

std::string to_string(const Integer &v) { return v.get_str(); }
std::string to_string(const Rational &v) { return v.get_str(); }

Integer parse_integer(std::string_view text) {
  std::string s(text);
  if (!s.empty() && s[0] == '+') s.erase(0, 1);
  Integer v;
  if (s.empty() || v.set_str(s, 10) != 0)
    throw DomainError("not an integer: '" + std::string(text) + "'");
  return v;
}

Rational parse_rational(std::string_view text) {
  auto slash = text.find('/');
  if (slash == std::string_view::npos) return Rational(parse_integer(text));
  Integer n = parse_integer(text.substr(0, slash));
  Integer d = parse_integer(text.substr(slash + 1));
  if (d == 0) throw DomainError("zero denominator in '" + std::string(text) + "'");
  return make_rational(n, d);
}

long to_long(const Integer &v) {
  if (!v.fits_slong_p()) throw ResourceLimit("integer does not fit machine word");
  return v.get_si();
}

} // namespace pkit
