#pragma once

#include "pkit/formula.hpp"
#include "pkit/model.hpp"
#include "pkit/qe.hpp"
#include "pkit/rat_affine.hpp"

#include <optional>
#include <string>
#include <vector>

namespace pkit {

/// One coordinate of a cell. Bounds and values are rational affine in the
/// earlier coordinates and the parameters; on the cell they are integral.
struct CellCoord {
  enum class Type { Graph, Interval };
  Type type = Type::Interval;
  RatAffine value;                  // Graph
  std::optional<RatAffine> lower;   // Interval, inclusive
  std::optional<RatAffine> upper;   // Interval, inclusive
  Integer modulus = 1;              // Interval: y === residue mod modulus
  Integer residue = 0;
  /// Interval only: fibres exceed every standard bound (exact symbolic test).
  /// Intervals are emitted whenever some fibre has more than the certificate
  /// depth many points; this flag records the stronger property.
  bool unbounded_fibers = false;

  bool is_interval() const { return type == Type::Interval; }
  bool operator==(const CellCoord &o) const;
};

struct CellDesc {
  std::vector<std::string> vars;
  std::vector<CellCoord> coords;
  /// Condition on symbolic (unassigned) parameters; true otherwise.
  Formula param_condition = Formula::truth(true);

  std::vector<int> signature() const;
  int dim() const;
  bool is_open() const;
  Formula formula() const;
  /// Membership formula of the coordinate j alone (given earlier coords).
  Formula coord_formula(std::size_t j) const;
  /// Bound or value of coordinate j written as a function of the interval
  /// (1-entry) coordinates before j, graph coordinates substituted away.
  RatAffine in_free_coords(const RatAffine &f, std::size_t j) const;
  std::string str() const;
};

struct DecomposeOptions {
  QeOptions qe;
  /// A bounded interval is emitted as a 1-entry when some fibre holds more
  /// than this many points; otherwise it is split into graph cells.
  int certificate_depth = 8;
  bool merge = true;
};

/// Cell decomposition of a quantifier-free formula along `vars` (the last
/// variable is swept first). Free variables not in `vars` are parameters;
/// those bound in `params` are instantiated in M, the rest stay symbolic.
std::vector<CellDesc> decompose(const Formula &f, const std::vector<std::string> &vars,
                                const Assignment &params = {},
                                const DecomposeOptions &opts = {});

struct PartitionReport {
  bool covers = false;
  bool disjoint = false;
  std::vector<std::pair<std::size_t, std::size_t>> overlapping;
  bool ok() const { return covers && disjoint; }
};

/// Decides coverage (forall x. f <-> OR cells) and pairwise disjointness.
PartitionReport certify_partition(const Formula &f, const std::vector<CellDesc> &cells,
                                  const Assignment &params = {}, const QeOptions &qe = {});

/// Raised when a relation passed as a function graph is not functional.
class NotFunctional : public DomainError {
public:
  NotFunctional(const std::string &msg, Assignment witness)
      : DomainError(msg), witness_(std::move(witness)) {}
  const Assignment &witness() const { return witness_; }

private:
  Assignment witness_;
};

struct FunctionPiece {
  CellDesc domain;
  LinearFunction function;
};

std::vector<FunctionPiece> decompose_function(const Formula &graph,
                                              const std::vector<std::string> &in_vars,
                                              const std::string &out_var,
                                              const Assignment &params = {},
                                              const DecomposeOptions &opts = {});

/// Dimension of the set defined by f in the listed variables (all free
/// variables when empty); nullopt for the empty set. Quantifiers are
/// eliminated first.
std::optional<int> dim(const Formula &f, const std::vector<std::string> &vars = {},
                       const Assignment &params = {}, const DecomposeOptions &opts = {});

// ---- definable closure and generic points --------------------------------

/// An 0-linear alpha with alpha(params) = b, or nullopt.
std::optional<LinearFunction> in_dcl(const ModelElement &b,
                                     const std::vector<ModelElement> &params);

/// dcl-dimension of `tuple` over `over`.
int tuple_dim(const std::vector<ModelElement> &tuple, const std::vector<ModelElement> &over);

/// A point of the cell whose dimension over `over` (plus the cell's
/// parameters) equals the cell's dimension. Throws when the cell is empty or
/// a 1-entry has finite width at the chosen base point.
std::vector<ModelElement> generic_point(const CellDesc &cell, const Assignment &params = {},
                                        const std::vector<ModelElement> &over = {});

bool cell_contains(const CellDesc &cell, const std::vector<ModelElement> &point,
                   const Assignment &params = {});

} // namespace pkit
