#pragma once

#include "pkit/model.hpp"
#include "pkit/numeric.hpp"

#include <cstddef>
#include <functional>
#include <memory>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace pkit {

/// Integer linear combination of variables plus a constant. Coefficients are
/// kept sorted by variable name and never zero.
class LinearTerm {
public:
  using Entry = std::pair<std::string, Integer>;

  LinearTerm() = default;
  LinearTerm(long c) : const_(c) {}
  LinearTerm(Integer c) : const_(std::move(c)) {}
  static LinearTerm var(const std::string &name, const Integer &coeff = 1);

  const std::vector<Entry> &coeffs() const { return coeffs_; }
  const Integer &constant() const { return const_; }
  Integer coeff(const std::string &var) const;
  bool has(const std::string &var) const { return coeff(var) != 0; }
  bool is_constant() const { return coeffs_.empty(); }
  std::set<std::string> vars() const;

  LinearTerm &operator+=(const LinearTerm &o);
  LinearTerm &operator-=(const LinearTerm &o);
  LinearTerm &operator*=(const Integer &k);
  LinearTerm operator-() const;
  friend LinearTerm operator+(LinearTerm a, const LinearTerm &b) { return a += b; }
  friend LinearTerm operator-(LinearTerm a, const LinearTerm &b) { return a -= b; }
  friend LinearTerm operator*(LinearTerm a, const Integer &k) { return a *= k; }
  friend LinearTerm operator*(const Integer &k, LinearTerm a) { return a *= k; }
  friend bool operator==(const LinearTerm &, const LinearTerm &) = default;

  void set_coeff(const std::string &var, const Integer &c);
  void set_constant(const Integer &c) { const_ = c; }
  /// Term with `var` removed (its coefficient dropped).
  LinearTerm without(const std::string &var) const;
  LinearTerm substitute(const std::string &var, const LinearTerm &by) const;
  LinearTerm rename(const std::string &from, const std::string &to) const;
  /// gcd of all variable coefficients (0 for a constant term).
  Integer content() const;

  ModelElement eval(const Assignment &env) const;
  std::size_t hash() const;
  std::string str() const;

private:
  std::vector<Entry> coeffs_;
  Integer const_ = 0;
};

enum class Rel { Eq, Le, Ge, Lt, Gt, Cong };
enum class Kind { True, False, Atom, And, Or, Not, Exists, Forall };

const char *rel_symbol(Rel r);

/// Atomic formula lhs REL rhs. Congruences are stored as
/// `lhs === rhs mod modulus` with rhs the constant residue in [0, modulus).
struct Atom {
  Rel rel = Rel::Eq;
  LinearTerm lhs;
  LinearTerm rhs;
  Integer modulus = 0;

  /// lhs - rhs, the term compared against zero.
  LinearTerm diff() const { return lhs - rhs; }
  bool operator==(const Atom &) const = default;
};

class Formula {
public:
  Formula(); // true

  static Formula truth(bool v);
  static Formula atom(Atom a);
  static Formula rel(Rel r, LinearTerm lhs, LinearTerm rhs);
  /// t1 === t2 mod n, normalized to (var part) === c mod n. n >= 1; n == 1
  /// yields true.
  static Formula cong(const LinearTerm &t1, const LinearTerm &t2, const Integer &n);
  static Formula conj(std::vector<Formula> parts); // no simplification
  static Formula disj(std::vector<Formula> parts);
  static Formula negate(Formula f);
  static Formula exists(const std::string &var, Formula body);
  static Formula forall(const std::string &var, Formula body);

  Kind kind() const;
  bool is_true() const { return kind() == Kind::True; }
  bool is_false() const { return kind() == Kind::False; }
  bool is_atom() const { return kind() == Kind::Atom; }
  const Atom &atom() const;
  const std::vector<Formula> &children() const;
  const Formula &child() const; // Not / quantifier body
  const std::string &bound_var() const;

  std::set<std::string> free_vars() const;
  bool is_quantifier_free() const;
  std::size_t size() const; // node count
  std::size_t hash() const;
  std::string str() const;

  friend bool operator==(const Formula &a, const Formula &b);
  friend bool operator!=(const Formula &a, const Formula &b) { return !(a == b); }

  struct Node;

private:
  explicit Formula(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

// Light simplifying constructors used throughout the algorithms.
Formula mk_and(std::vector<Formula> parts);
Formula mk_or(std::vector<Formula> parts);
Formula mk_not(const Formula &f);
Formula mk_implies(const Formula &a, const Formula &b);
Formula mk_iff(const Formula &a, const Formula &b);
Formula mk_exists(const std::vector<std::string> &vars, Formula body);
Formula mk_forall(const std::vector<std::string> &vars, Formula body);

/// Universal closure over all free variables not listed in `keep`.
Formula closure(const Formula &f, const std::set<std::string> &keep = {});

/// Replaces free occurrences of `var` by `by`. Bound variables that would
/// capture a variable of `by` are renamed.
Formula substitute(const Formula &f, const std::string &var, const LinearTerm &by);
Formula rename_free(const Formula &f, const std::string &from, const std::string &to);

/// Applies `fn` to every atom (post-order rebuild with mk_* constructors).
Formula map_atoms(const Formula &f, const std::function<Formula(const Atom &)> &fn);

/// Name not in `taken`, derived from `base`.
std::string fresh_name(const std::string &base, const std::set<std::string> &taken);

struct FormulaHash {
  std::size_t operator()(const Formula &f) const { return f.hash(); }
};

} // namespace pkit
