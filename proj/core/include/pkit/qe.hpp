#pragma once

#include "pkit/formula.hpp"
#include "pkit/model.hpp"

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

namespace pkit {

struct QeOptions {
  /// Abort with ResourceLimit when an intermediate formula exceeds this many
  /// AST nodes.
  std::size_t node_budget = 1000000;
};

struct QeStats {
  std::size_t peak_nodes = 0;
  std::size_t eliminated = 0;
};

/// Quantifier-free equivalent of `f` (Cooper's method).
Formula eliminate(const Formula &f, const QeOptions &opts = {}, QeStats *stats = nullptr);

/// Truth of `f` in M once its free variables are bound by `params`.
/// With no free variables this is truth in every model of Presburger arithmetic.
bool decide(const Formula &f, const Assignment &params = {}, const QeOptions &opts = {});

/// Values for the free variables of `f` not bound in `params` making `f`
/// true, or nullopt when none exist. With standard parameters the witness is
/// standard. The witness is re-checked by evaluation before it is returned.
std::optional<Assignment> satisfiable(const Formula &f, const Assignment &params = {},
                                      const QeOptions &opts = {});

/// Conjunction of x === c_i mod N_i as a single congruence x === c* mod N*
/// (N* = lcm), or nullopt when inconsistent.
std::optional<std::pair<Integer, Integer>>
crt_merge(const std::vector<std::pair<Integer, Integer>> &congruences);

/// Negation normal form of a quantifier-free formula with canonical atoms
/// (t <= 0, t = 0, t === 0 mod N), constants folded and redundant atoms
/// merged. Equivalent to the input.
Formula simplify(const Formula &qf);

/// Prints canonical atoms with variables moved to the side where their
/// coefficient is positive. Equivalent to the input.
Formula prettify(const Formula &qf);

} // namespace pkit
