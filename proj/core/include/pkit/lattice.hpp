#pragma once

// Local lattices in boxes of Z^k and the realization of a finite abelian
// group as (union of nB) / lattice.

#include "pkit/group.hpp"
#include "pkit/int_matrix.hpp"

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace pkit {

using Point = std::vector<long>;

/// Product of integer intervals [lo_i, hi_i] containing 0.
struct IntBox {
  Point lo, hi;

  std::size_t dim() const { return lo.size(); }
  bool contains(const Point &p) const;
  std::vector<Point> points() const;
  /// n * box (Minkowski sum of n copies).
  IntBox scaled(long n) const;
  std::string str() const;
};

struct LocalLattice {
  IntBox box;
  std::vector<Point> generators;
  int depth = 3;
};

struct SeparationReport {
  bool separated = false;     // (l + B) meets the generated points only in l
  bool meets_box_at_zero = false; // lattice inside B is {0} (exact)
  std::optional<std::pair<Point, Point>> witness; // l and another point in l + B
  std::size_t points_checked = 0;
  bool ok() const { return separated && meets_box_at_zero; }
};

SeparationReport check_local_lattice(const LocalLattice &lat, std::optional<int> depth = {});

/// f(b) = (a + b) a^-1 for b in the box: the group law pulled back to a
/// neighbourhood of 0.
class BaseMap {
public:
  BaseMap(const FiniteGroup &g, Point center, IntBox box);
  const FiniteGroup &group() const { return *g_; }
  const IntBox &box() const { return box_; }
  std::size_t operator()(const Point &b) const; // element index
  /// f(b1) ... f(bn) for a decomposition b = b1 + ... + bn.
  std::size_t along(const std::vector<Point> &parts) const;
  /// A decomposition of p into box elements (greedy, clamped steps).
  std::vector<Point> decompose(const Point &p) const;
  /// A random decomposition of p into exactly n box elements; nullopt when
  /// p is not in nB.
  std::optional<std::vector<Point>> random_decomposition(const Point &p, long n,
                                                         std::mt19937_64 &rng) const;

private:
  const FiniteGroup *g_;
  Point center_;
  IntBox box_;
  std::vector<std::size_t> values_;
  std::size_t center_inverse_;
};

struct LadderLevel {
  long n = 0;
  std::size_t points = 0;      // |nB|
  std::size_t image = 0;       // |f_n(nB)|
  std::size_t kernel = 0;      // |Lambda_n|
  std::size_t conflicts = 0;   // points where two decompositions disagreed
};

struct LadderReport {
  std::vector<LadderLevel> levels;
  std::optional<long> stable_level; // n* with f_n(nB) = f_{n+1}((n+1)B)
  IntMat lattice;                   // HNF basis of the union of kernels
  std::vector<std::size_t> g0;      // element indices of the union of images
  bool well_defined = true;
  bool images_monotone = true;
  bool g0_subgroup = false;
  std::size_t index = 0; // [G : G0]
  bool lattice_meets_box_at_zero = false;
  bool f1_generic = false; // finitely many translates of f(B) cover G
  std::vector<std::string> trace;
};

struct LadderOptions {
  long budget = 16;
  /// Stop once the lattice has full rank and index |G0| (after n*).
  bool stop_when_complete = true;
};

LadderReport ladder(const BaseMap &f, const LadderOptions &opts = {});

struct Quotient {
  IntMat hnf;
  std::vector<Integer> invariant_factors; // nontrivial ones, d1 | d2 | ...
  Integer order = 0;
  std::vector<Point> representatives; // fundamental domain of the HNF
};

/// Finite quotient Z^k / lattice (throws DomainError when not full rank).
Quotient quotient(const IntMat &lattice, std::size_t k);
Quotient quotient(const LocalLattice &lat);

struct IsomorphismReport {
  bool sizes_match = false;
  bool well_defined = false;
  bool homomorphism = false;
  bool bijective = false;
  std::string detail;
  bool ok() const { return sizes_match && well_defined && homomorphism && bijective; }
};

/// Checks b + Lambda -> f_n(b) from the quotient onto G0 by enumeration.
IsomorphismReport verify_isomorphism(const BaseMap &f, const LadderReport &lad, const Quotient &q);

/// Invariant factors of a finite abelian group by counting element orders
/// (throws when the group is not abelian).
std::vector<Integer> abelian_invariants(const FiniteGroup &g);

/// Draws two random decompositions of random points of nB and compares
/// f along both; returns the number of disagreements.
std::size_t well_definedness_stress(const BaseMap &f, long n, std::size_t trials, std::mt19937_64 &rng);

} // namespace pkit
