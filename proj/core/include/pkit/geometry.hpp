#pragma once

#include "pkit/cells.hpp"
#include "pkit/formula.hpp"
#include "pkit/model.hpp"
#include "pkit/qe.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace pkit {

/// Names model constants so that formulas over M can mention them. The
/// resulting assignment is merged with the caller's parameters before
/// deciding.
class ConstPool {
public:
  explicit ConstPool(std::string prefix = "_c") : prefix_(std::move(prefix)) {}
  std::string name(const ModelElement &e);
  LinearTerm term(const ModelElement &e) { return LinearTerm::var(name(e)); }
  const Assignment &env() const { return env_; }
  Assignment with(const Assignment &params) const;

private:
  std::string prefix_;
  std::map<ModelElement, std::string> names_;
  Assignment env_;
};

// ---- boxes -----------------------------------------------------------------

struct BoxSide {
  ModelElement lo, hi;
  Integer modulus = 1;
  Integer residue = 0;
};

struct Box {
  std::vector<BoxSide> sides;
  std::optional<std::vector<ModelElement>> anchor;

  std::size_t size() const { return sides.size(); }
  Formula formula(const std::vector<std::string> &vars, ConstPool &pool) const;
  bool contains(const std::vector<ModelElement> &x) const;
  /// Anchor inside and both [lo, a_i], [a_i, hi] infinite for every i.
  bool margins_infinite() const;
  /// Componentwise intersection (nullopt when a congruence clash empties it).
  std::optional<Box> intersect(const Box &o) const;
  std::string str() const;
};

struct BoxOptions {
  QeOptions qe;
  int max_shrinks = 48;
  /// Desk-scale mode for standard finite sets: margins may be finite and the
  /// search stops at radius 0 instead of failing on finite slack.
  bool allow_finite = false;
};

/// Box around a dim-generic point `a` of an open cell, contained in the cell.
Box box_around(const CellDesc &cell, const std::vector<ModelElement> &a,
               const Assignment &params = {}, const BoxOptions &opts = {});

/// Certifies box subset of cell by decision.
bool box_inside(const Box &box, const CellDesc &cell, const Assignment &params = {},
                const QeOptions &qe = {});

struct CBox {
  CellDesc cell;
  std::vector<std::size_t> free; // interval coordinates of the cell
  Box box;                       // in the free coordinates

  Formula formula(ConstPool &pool) const;
  bool contains(const std::vector<ModelElement> &x, const Assignment &params = {}) const;
};

/// Open cell in the free coordinates of `cell` (graph coordinates removed).
CellDesc project_free(const CellDesc &cell);

CBox cbox_around(const CellDesc &cell, const std::vector<ModelElement> &a,
                 const Assignment &params = {}, const BoxOptions &opts = {});

// ---- strips and parallelograms --------------------------------------------

/// gamma1 <= sum coeffs_i x_i <= gamma2.
struct Strip {
  std::vector<Rational> coeffs;
  ScaledElement lower, upper;

  /// lcm of the coefficient denominators and the bound denominators.
  Integer clearing() const;
  ScaledElement apply(const std::vector<ModelElement> &x) const;
  bool contains(const std::vector<ModelElement> &x) const;
  bool infinite_width() const;
};

/// Denominator-cleared formula of the strip; bound constants go to `pool`.
Formula strip_formula(const Strip &s, const std::vector<std::string> &vars, ConstPool &pool);

/// sum coeffs_i x_i === residue mod modulus.
struct LinearCong {
  std::vector<Integer> coeffs;
  Integer residue = 0;
  Integer modulus = 1;
  bool contains(const std::vector<ModelElement> &x) const;
};

/// x_k = sum coeffs_i * (free coordinate i) + offset.
struct GraphMap {
  std::vector<Rational> coeffs;
  ScaledElement offset;
};

struct Parallelogram {
  std::size_t n = 0;                 // ambient dimension
  std::vector<std::size_t> free;     // coordinates the strips act on
  std::vector<Strip> strips;         // over the free coordinates
  std::vector<LinearCong> congruences; // over the free coordinates
  std::vector<std::optional<GraphMap>> graph; // size n; set for dependent coordinates
  std::optional<std::vector<ModelElement>> center;

  std::size_t dim() const { return free.size(); }
  bool is_open() const { return free.size() == n; }
  std::vector<ModelElement> free_part(const std::vector<ModelElement> &x) const;
  bool contains(const std::vector<ModelElement> &x) const;
  Formula formula(const std::vector<std::string> &vars, ConstPool &pool) const;
  /// |2 f_i(center) - (gamma1_i + gamma2_i)| finite for every strip.
  bool is_centered() const;
  std::string str() const;
};

/// Points a + sum_i t_i * directions[i] in Z^n with t_i in [0, lengths[i]].
struct GeneratorForm {
  std::vector<ModelElement> anchor;
  std::vector<std::vector<Rational>> directions;
  std::vector<ModelElement> lengths;

  std::size_t n() const { return anchor.size(); }
  Formula formula(const std::vector<std::string> &vars, ConstPool &pool) const;
  /// Point for integer coordinates t (not checked for integrality).
  std::vector<ScaledElement> point(const std::vector<ModelElement> &t) const;
};

Parallelogram generators_to_strips(const GeneratorForm &g);

struct Octant {
  Parallelogram parent;
  std::vector<int> eta;
  Parallelogram region; // the octant as a parallelogram

  bool contains(const std::vector<ModelElement> &x) const { return region.contains(x); }
};

Octant octant_of(const Parallelogram &p, const std::vector<int> &eta);

struct BoundedOptions {
  DecomposeOptions cells;
};

/// Parallelograms whose union is f. f must be bounded by alpha in every
/// coordinate; cells of dimension at most 2 are supported.
std::vector<Parallelogram> decompose_bounded(const Formula &f, const std::vector<std::string> &vars,
                                             const ModelElement &alpha, const Assignment &params = {},
                                             const BoundedOptions &opts = {});

/// Splits an open bounded parallelogram into 2^n pieces with dim-generic
/// centers over the parameters.
std::vector<Parallelogram> split_generic_centers(const Parallelogram &p,
                                                 const std::vector<ModelElement> &params = {});

/// forall x (a <-> b) for two formulas over the same variables and constants.
bool decide_equivalent(const Formula &a, const Formula &b, const Assignment &env,
                       const QeOptions &qe = {});
bool decide_subset(const Formula &a, const Formula &b, const Assignment &env,
                   const QeOptions &qe = {});

} // namespace pkit
