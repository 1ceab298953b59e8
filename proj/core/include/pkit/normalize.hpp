#pragma once

#include "pkit/formula.hpp"
#include "pkit/rat_affine.hpp"

#include <string>
#include <vector>

namespace pkit {

/// One of x = b, x <= b, x >= b, x === c mod N, where b is affine in the
/// parameters and integral under the accompanying guard.
struct NormalAtom {
  enum class Form { Eq, Le, Ge, Cong };
  Form form = Form::Cong;
  RatAffine bound;     // Eq / Le / Ge
  Integer modulus = 1; // Cong
  Integer residue = 0; // Cong

  Formula to_formula(const std::string &var) const;
  std::string str(const std::string &var) const;
};

struct GuardedAtom {
  Formula guard; // conjunction of parameter congruences (or the atom itself
                 // when `var` does not occur)
  NormalAtom atom;
};

/// Case split of an atom with distinguished variable `var`. The guards are
/// pairwise exclusive; the disjunction of guard /\ atom is equivalent to the
/// input in every Z-group. Guards whose case is unsatisfiable are omitted.
std::vector<GuardedAtom> normalize_atomic(const Atom &atom, const std::string &var);
std::vector<GuardedAtom> normalize_atomic(const Formula &atom, const std::string &var);

/// Reassembles the case split into a formula.
Formula reassemble(const std::vector<GuardedAtom> &cases, const std::string &var);

} // namespace pkit
