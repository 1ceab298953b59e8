#pragma once

#include "pkit/numeric.hpp"

#include <compare>
#include <iosfwd>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace pkit {

/// Element of Q^k x_lex Z. q[0] is the most significant archimedean
/// class; trailing zero entries are trimmed so equal elements compare equal
/// field by field. Standard integers have an empty q.
class ModelElement {
public:
  ModelElement() = default;
  ModelElement(long z) : z_(z) {}
  ModelElement(Integer z) : z_(std::move(z)) {}
  ModelElement(std::vector<Rational> q, Integer z);

  /// Element with a single nonzero rational entry at archimedean rank `rank`.
  static ModelElement infinite(const Rational &q, std::size_t rank = 0,
                               const Integer &z = 0);

  const std::vector<Rational> &q() const { return q_; }
  const Integer &z() const { return z_; }
  Rational q_at(std::size_t i) const { return i < q_.size() ? q_[i] : Rational(0); }
  /// Number of archimedean classes in use (0 for standard integers).
  std::size_t rank() const { return q_.size(); }

  bool is_finite() const { return q_.empty(); }
  bool is_zero() const { return q_.empty() && z_ == 0; }
  int sign() const;

  /// The unique c in [0, n) with this == c mod n.
  Integer residue(const Integer &n) const;
  /// (q/n, floor(z/n)); this - n * result == residue(n).
  ModelElement div_floor(const Integer &n) const;
  /// Exact division; throws DomainError unless residue(n) == 0.
  ModelElement div_exact(const Integer &n) const;

  ModelElement operator-() const;
  ModelElement &operator+=(const ModelElement &o);
  ModelElement &operator-=(const ModelElement &o);
  ModelElement &operator*=(const Integer &k);
  friend ModelElement operator+(ModelElement a, const ModelElement &b) { return a += b; }
  friend ModelElement operator-(ModelElement a, const ModelElement &b) { return a -= b; }
  friend ModelElement operator*(ModelElement a, const Integer &k) { return a *= k; }
  friend ModelElement operator*(const Integer &k, ModelElement a) { return a *= k; }

  friend bool operator==(const ModelElement &a, const ModelElement &b);
  friend std::strong_ordering operator<=>(const ModelElement &a, const ModelElement &b);

  std::string str() const;

private:
  void trim();
  std::vector<Rational> q_;
  Integer z_ = 0;
};

std::ostream &operator<<(std::ostream &os, const ModelElement &e);

/// Element of M tensor Q: rational multiples of model elements, used for
/// strip bounds like (l/m) d and for midpoints.
class ScaledElement {
public:
  ScaledElement() = default;
  ScaledElement(const ModelElement &e);
  ScaledElement(std::vector<Rational> q, Rational z);

  const std::vector<Rational> &q() const { return q_; }
  const Rational &z() const { return z_; }
  Rational q_at(std::size_t i) const { return i < q_.size() ? q_[i] : Rational(0); }
  std::size_t rank() const { return q_.size(); }
  bool is_finite() const { return q_.empty(); }
  int sign() const;

  ScaledElement operator-() const;
  ScaledElement &operator+=(const ScaledElement &o);
  ScaledElement &operator-=(const ScaledElement &o);
  ScaledElement &operator*=(const Rational &k);
  friend ScaledElement operator+(ScaledElement a, const ScaledElement &b) { return a += b; }
  friend ScaledElement operator-(ScaledElement a, const ScaledElement &b) { return a -= b; }
  friend ScaledElement operator*(ScaledElement a, const Rational &k) { return a *= k; }
  friend ScaledElement operator*(const Rational &k, ScaledElement a) { return a *= k; }

  friend bool operator==(const ScaledElement &a, const ScaledElement &b);
  friend std::strong_ordering operator<=>(const ScaledElement &a, const ScaledElement &b);

  /// True when the integer part is integral, i.e. the value lies in M.
  bool in_model() const { return z_.get_den() == 1; }
  ModelElement to_model() const; // throws unless in_model()
  /// Largest element of M that is <= this.
  ModelElement floor() const;
  /// Smallest element of M that is >= this.
  ModelElement ceil() const;

  std::string str() const;

private:
  void trim();
  std::vector<Rational> q_;
  Rational z_ = 0;
};

std::ostream &operator<<(std::ostream &os, const ScaledElement &e);

/// Literal syntax: sums of `inf*q`, `infK*q` (K >= 2 selects a less
/// significant class) and integers, e.g. `inf*1/2 + 3`, `-inf2*2 - 7`.
ModelElement parse_element(std::string_view text);
ScaledElement parse_scaled(std::string_view text);

/// True iff hi - lo has a nonzero rational part. Requires lo <= hi.
bool interval_infinite(const ModelElement &lo, const ModelElement &hi);
bool is_finite(const ModelElement &e);

using Assignment = std::map<std::string, ModelElement>;

/// Smallest archimedean rank not used by any element (fresh direction).
std::size_t fresh_rank(const std::vector<ModelElement> &elems);

} // namespace pkit
