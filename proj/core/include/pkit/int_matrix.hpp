#pragma once

// Exact integer matrices: Hermite and Smith normal forms.

#include "pkit/numeric.hpp"

#include <vector>

namespace pkit {

using IntVec = std::vector<Integer>;
using IntMat = std::vector<IntVec>; // row-major

/// Row Hermite normal form of the row lattice: nonzero rows only, upper
/// echelon, positive pivots, entries above each pivot reduced into
/// [0, pivot).
IntMat hermite_normal_form(IntMat m);

/// Pivot column of each HNF row.
std::vector<std::size_t> hnf_pivots(const IntMat &h);

/// Nonzero diagonal of the Smith normal form, d1 | d2 | ...
std::vector<Integer> smith_invariants(IntMat m);

/// v reduced modulo the row lattice of a square full-rank HNF: every
/// coordinate lands in [0, h_ii).
IntVec reduce_mod(const IntMat &h, IntVec v);

/// Integer coefficients c with c * h = v when v lies in the row lattice.
bool in_row_lattice(const IntMat &h, const IntVec &v);

Integer determinant_of_hnf(const IntMat &h);

} // namespace pkit
