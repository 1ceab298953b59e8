#pragma once

#include "pkit/formula.hpp"
#include "pkit/model.hpp"

#include <string>
#include <utility>
#include <vector>

namespace pkit {

/// Rational affine expression sum q_v * v + c over named variables.
class RatAffine {
public:
  using Entry = std::pair<std::string, Rational>;

  RatAffine() = default;
  RatAffine(long c) : const_(c) {}
  RatAffine(Rational c) : const_(std::move(c)) {}
  RatAffine(const LinearTerm &t);
  static RatAffine var(const std::string &name, const Rational &coeff = 1);

  const std::vector<Entry> &coeffs() const { return coeffs_; }
  const Rational &constant() const { return const_; }
  Rational coeff(const std::string &v) const;
  void set_coeff(const std::string &v, const Rational &c);
  void set_constant(const Rational &c) { const_ = c; }
  bool is_constant() const { return coeffs_.empty(); }
  std::set<std::string> vars() const;

  RatAffine &operator+=(const RatAffine &o);
  RatAffine &operator-=(const RatAffine &o);
  RatAffine &operator*=(const Rational &k);
  RatAffine operator-() const;
  friend RatAffine operator+(RatAffine a, const RatAffine &b) { return a += b; }
  friend RatAffine operator-(RatAffine a, const RatAffine &b) { return a -= b; }
  friend RatAffine operator*(RatAffine a, const Rational &k) { return a *= k; }
  friend RatAffine operator*(const Rational &k, RatAffine a) { return a *= k; }
  friend bool operator==(const RatAffine &, const RatAffine &) = default;

  RatAffine substitute(const std::string &v, const RatAffine &by) const;
  RatAffine without(const std::string &v) const;

  /// lcm of all denominators (coefficients and constant).
  Integer denominator() const;
  /// k * this as an integer term; throws unless k clears every denominator.
  LinearTerm scaled_term(const Integer &k) const;

  ScaledElement eval(const Assignment &env) const;
  /// Evaluation that must land in the model.
  ModelElement eval_element(const Assignment &env) const;

  std::string str() const;

private:
  std::vector<Entry> coeffs_;
  Rational const_ = 0;
};

/// f(x) = sum s_i (x_i - c_i) / k_i + gamma, defined where x_i == c_i mod k_i.
/// gamma is affine in the parameters (never in the inputs).
struct LinearFunction {
  std::vector<std::string> inputs;
  std::vector<Integer> s;
  std::vector<Integer> k;
  std::vector<Integer> c;
  RatAffine gamma;

  /// Builds the function from an affine expression in inputs + parameters
  /// given the residue class (c_i mod k_i) on which it is integral. Each
  /// coefficient's reduced denominator must divide the stated k_i; missing
  /// residues default to (0 mod 1).
  static LinearFunction from_affine(const RatAffine &f, const std::vector<std::string> &inputs,
                                    const std::vector<std::pair<Integer, Integer>> &classes = {});

  RatAffine as_affine() const;
  /// Congruence conditions on the inputs (true when all k_i == 1).
  Formula domain() const;
  bool in_domain(const std::vector<ModelElement> &x) const;
  ModelElement eval(const std::vector<ModelElement> &x, const Assignment &params = {}) const;
  std::string str() const;
};

/// Matrix form: row i of A applied to (x - c^i) plus gamma_i.
struct AffineMap {
  std::vector<std::vector<Rational>> A; // k x m
  std::vector<Integer> c;               // m*k residues, row-major
  std::vector<Integer> moduli;          // m*k moduli matching c
  std::vector<RatAffine> gamma;         // length k

  std::size_t rows() const { return A.size(); }
  std::size_t cols() const { return A.empty() ? 0 : A[0].size(); }
  std::vector<ModelElement> apply(const std::vector<ModelElement> &x,
                                  const Assignment &params = {}) const;
  std::vector<ModelElement> gamma_values(const Assignment &params = {}) const;
  bool is_identity() const;
};

AffineMap matrix_representation(const std::vector<LinearFunction> &fs);

} // namespace pkit
