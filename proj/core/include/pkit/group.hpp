#pragma once

#include "pkit/cells.hpp"
#include "pkit/formula.hpp"
#include "pkit/geometry.hpp"
#include "pkit/model.hpp"
#include "pkit/qe.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace pkit {

/// A group whose carrier and multiplication are Presburger formulas.
/// Carrier variables are x (n = 1) or x1..xn; the operation also uses y and
/// z for the second factor and the product.
struct DefinableGroup {
  std::string name;
  std::size_t n = 1;
  Formula carrier;
  Formula op;
  std::optional<std::vector<ModelElement>> identity;
  Assignment params;
  std::optional<ModelElement> bound;

  std::vector<std::string> xs() const;
  std::vector<std::string> ys() const;
  std::vector<std::string> zs() const;

  /// Carrier at arbitrary terms.
  Formula carrier_at(const std::vector<LinearTerm> &x) const;
  /// op(x, y, z) at arbitrary terms.
  Formula op_at(const std::vector<LinearTerm> &x, const std::vector<LinearTerm> &y,
                const std::vector<LinearTerm> &z) const;
  std::vector<ModelElement> param_values() const;
  /// True when every parameter is a standard integer.
  bool standard() const;
};

std::vector<std::string> coord_names(const std::string &prefix, std::size_t n);
std::vector<LinearTerm> var_terms(const std::vector<std::string> &names);

struct AxiomCheck {
  std::string name;
  bool holds = false;
  std::string sentence;
  std::optional<Assignment> counterexample;
};

struct GroupReport {
  std::vector<AxiomCheck> checks;
  std::optional<std::vector<ModelElement>> identity;
  bool ok() const;
  const AxiomCheck &get(const std::string &name) const;
};

/// Decides totality, functionality, associativity, identity and inverses.
GroupReport verify_group(const DefinableGroup &g, const QeOptions &qe = {});

/// Product of two elements (found by satisfiability).
std::vector<ModelElement> multiply(const DefinableGroup &g, const std::vector<ModelElement> &x,
                                   const std::vector<ModelElement> &y, const QeOptions &qe = {});
std::vector<ModelElement> inverse_of(const DefinableGroup &g, const std::vector<ModelElement> &x,
                                     const std::vector<ModelElement> &e, const QeOptions &qe = {});
bool in_carrier(const DefinableGroup &g, const std::vector<ModelElement> &x);

struct GroupOptions {
  QeOptions qe;
  int max_shrinks = 24;
  /// Refuse points that are not dim-generic (and independent) over the
  /// parameters.
  bool require_generic = true;
};

struct LocalLinearity {
  std::vector<std::vector<Rational>> M, N; // xy = M x + N y + gamma
  std::vector<ScaledElement> gamma;
  CBox box_a, box_b;
  std::string sentence;
};

/// C-boxes around a and b on which the product is M x + N y + gamma,
/// certified by decision.
LocalLinearity local_linearity(const DefinableGroup &g, const std::vector<ModelElement> &a,
                               const std::vector<ModelElement> &b, const GroupOptions &opts = {});

struct AdditionBox {
  CBox box;
  std::vector<ModelElement> center;
  std::vector<ModelElement> center_inverse;
  std::string sentence; // forall x, y in box: x a^-1 y = x - a + y
  int shrinks = 0;
};

/// C-box around a on which x a^-1 y = x - a + y, certified by decision.
AdditionBox local_addition_box(const DefinableGroup &g, const std::vector<ModelElement> &a,
                               const GroupOptions &opts = {});

/// Formula of the box (over the carrier variables x / x1..xn).
Formula addition_box_formula(const DefinableGroup &g, const AdditionBox &b, ConstPool &pool);

struct AbelianReport {
  Formula subgroup;    // over the carrier variables
  Assignment constants; // model constants the subgroup formula mentions
  AdditionBox box;
  bool abelian = false;
  bool subgroup_closed = false;
  bool contains_box = false;
  std::optional<int> dim_group, dim_subgroup;
  bool ok() const;
};

/// The double centralizer of (box a^-1) for the addition box around a.
AbelianReport abelian_finite_index(const DefinableGroup &g, const std::vector<ModelElement> &a,
                                   const GroupOptions &opts = {});

/// Decides that x -> x a is an isomorphism from (G, .) onto (G, x a^-1 y).
bool centered_isomorphism(const DefinableGroup &g, const std::vector<ModelElement> &a,
                          const QeOptions &qe = {});

/// On the half box P/2 around the center, x + y - a stays in the box and
/// agrees with x a^-1 y (decided).
bool half_box_closed(const DefinableGroup &g, const AdditionBox &b, const QeOptions &qe = {});

// ---- finite groups ---------------------------------------------------------

/// Cayley table of a finite group over standard Z, enumerated inside the
/// bound.
class FiniteGroup {
public:
  static constexpr std::size_t kMaxElements = 1000000;

  explicit FiniteGroup(const DefinableGroup &g, const QeOptions &qe = {});

  std::size_t size() const { return elems_.size(); }
  std::size_t n() const { return n_; }
  const std::vector<std::vector<long>> &elements() const { return elems_; }
  std::size_t index(const std::vector<long> &x) const; // npos when absent
  bool contains(const std::vector<long> &x) const { return index(x) != npos; }
  std::size_t mul(std::size_t a, std::size_t b) const;
  std::size_t identity() const { return e_; }
  std::size_t inverse(std::size_t a) const;

  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

private:
  std::size_t n_ = 0;
  std::vector<std::vector<long>> elems_;
  std::map<std::vector<long>, std::size_t> index_;
  std::vector<std::size_t> table_; // size^2
  std::size_t e_ = 0;
  std::vector<std::size_t> inv_;
};

struct GenericResult {
  bool generic = false;
  std::vector<std::vector<long>> translates;
};

/// Whether finitely many left translates g X cover G; greedy witnesses.
GenericResult is_generic_finite(const FiniteGroup &g, const Formula &x_set,
                                const std::vector<std::string> &vars);
/// Same, with X given by element indices.
GenericResult is_generic_finite(const FiniteGroup &g, const std::vector<std::size_t> &x_set);

} // namespace pkit
