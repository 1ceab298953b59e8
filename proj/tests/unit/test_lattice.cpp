#include "groups.hpp"
#include "oracles.hpp"

#include "pkit/int_matrix.hpp"
#include "pkit/lattice.hpp"

#include <gtest/gtest.h>

#include <memory>
#include <random>

using namespace pkit;

namespace {

IntMat M(std::initializer_list<std::initializer_list<long>> rows) {
  IntMat m;
  for (const auto &r : rows) m.push_back(IntVec(r.begin(), r.end()));
  return m;
}

std::vector<long> longs(const std::vector<Integer> &v) {
  std::vector<long> out;
  for (const auto &x : v) out.push_back(x.get_si());
  return out;
}

struct Pipeline {
  FiniteGroup group;
  BaseMap f;
  LadderReport lad;
  Quotient q;

  Pipeline(const DefinableGroup &g, Point a, IntBox box)
      : group(g), f(group, std::move(a), std::move(box)), lad(ladder(f)), q(quotient(lad.lattice, f.box().dim())) {}
};

} // namespace

TEST(IntMatrix, HermiteForm) {
  EXPECT_EQ(hermite_normal_form(M({{2, 1}, {0, 2}})), M({{2, 1}, {0, 2}}));
  EXPECT_EQ(hermite_normal_form(M({{4, 6}, {6, 9}})), M({{2, 3}}));
  EXPECT_EQ(hermite_normal_form(M({{0, -3}, {2, 5}})), M({{2, 2}, {0, 3}}));
  EXPECT_TRUE(hermite_normal_form(M({{0, 0}})).empty());
}

TEST(IntMatrix, SmithInvariants) {
  EXPECT_EQ(longs(smith_invariants(M({{12}}))), (std::vector<long>{12}));
  EXPECT_EQ(longs(smith_invariants(M({{2, 0}, {0, 3}}))), (std::vector<long>{1, 6}));
  EXPECT_EQ(longs(smith_invariants(M({{2, 1}, {0, 2}}))), (std::vector<long>{1, 4}));
  EXPECT_EQ(longs(smith_invariants(M({{6, 0}, {0, 4}}))), (std::vector<long>{2, 12}));
}

TEST(IntMatrix, MembershipAndReduction) {
  IntMat h = hermite_normal_form(M({{2, 1}, {0, 2}}));
  EXPECT_TRUE(in_row_lattice(h, {4, 0}));
  EXPECT_TRUE(in_row_lattice(h, {2, 3}));
  EXPECT_FALSE(in_row_lattice(h, {1, 0}));
  EXPECT_FALSE(in_row_lattice(h, {2, 0}));
  IntVec r = reduce_mod(h, {7, -5});
  EXPECT_TRUE(r[0] >= 0 && r[0] < 2 && r[1] >= 0 && r[1] < 2);
  IntVec d{7 - r[0], -5 - r[1]};
  EXPECT_TRUE(in_row_lattice(h, d));
}

TEST(IntMatrix, RandomFullRankAgainstQuotientOracle) {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<long> entry(-6, 6);
  int tested = 0;
  while (tested < 60) {
    std::size_t k = tested % 2 ? 3 : 2;
    std::vector<std::vector<long>> gens(k, std::vector<long>(k));
    IntMat m;
    for (auto &g : gens) {
      for (auto &v : g) v = entry(rng);
      m.push_back(IntVec(g.begin(), g.end()));
    }
    IntMat h = hermite_normal_form(m);
    if (h.size() != k) continue;
    long D = determinant_of_hnf(h).get_si();
    if (D > (k == 2 ? 60 : 20)) continue;
    ++tested;
    // same lattice: original rows reduce to zero, HNF stays canonical
    for (const auto &row : m) EXPECT_TRUE(in_row_lattice(h, row));
    EXPECT_EQ(hermite_normal_form(h), h);
    oracle::FiniteQuotient fq(gens, D, k);
    ASSERT_EQ(fq.order(), static_cast<std::size_t>(D));
    auto inv = longs(smith_invariants(m));
    for (long t = 1; t <= D; ++t)
      if (D % t == 0) {
        EXPECT_EQ(oracle::killed_by(inv, t), fq.killed_by(t)) << "divisor " << t;
      }
  }
}

TEST(LocalLatticeCheck, OneDimensional) {
  IntBox B{{-5}, {5}};
  EXPECT_TRUE(check_local_lattice({B, {{12}}, 3}).ok());
  EXPECT_TRUE(check_local_lattice({B, {{8}}, 3}).ok());
  auto bad = check_local_lattice({B, {{4}}, 3});
  EXPECT_FALSE(bad.separated);
  EXPECT_FALSE(bad.meets_box_at_zero);
  ASSERT_TRUE(bad.witness.has_value());
  const auto &[l, m] = *bad.witness;
  EXPECT_NE(l, m);
  EXPECT_TRUE(B.contains({m[0] - l[0]}));
}

TEST(LocalLatticeCheck, Planar) {
  IntBox B{{-5, -5}, {5, 5}};
  auto rep = check_local_lattice({B, {{12, 0}, {0, 12}}, 3});
  EXPECT_TRUE(rep.ok());
  EXPECT_EQ(rep.points_checked, 49u * 49u);
  EXPECT_FALSE(check_local_lattice({B, {{12, 0}, {7, 5}}, 3}).ok());
}

TEST(LocalLatticeCheck, RejectsBoxWithoutZero) {
  EXPECT_THROW(check_local_lattice({IntBox{{1}, {3}}, {{12}}, 3}), DomainError);
}

TEST(Quotient, Examples) {
  auto q = quotient(M({{12}}), 1);
  EXPECT_EQ(longs(q.invariant_factors), (std::vector<long>{12}));
  EXPECT_EQ(q.representatives.size(), 12u);
  EXPECT_EQ(longs(quotient(M({{2, 0}, {0, 3}}), 2).invariant_factors), (std::vector<long>{6}));
  EXPECT_EQ(longs(quotient(M({{2, 1}, {0, 2}}), 2).invariant_factors), (std::vector<long>{4}));
  EXPECT_THROW(quotient(M({{2, 1}}), 2), DomainError);
}

TEST(BaseMap, CyclicIsRecenteredInclusion) {
  FiniteGroup g(fixtures::cyclic(12));
  BaseMap f(g, {6}, IntBox{{-2}, {2}});
  for (long b = -2; b <= 2; ++b) EXPECT_EQ(g.elements()[f({b})][0], ((b % 12) + 12) % 12);
  EXPECT_THROW(BaseMap(g, {6}, IntBox{{-7}, {2}}), DomainError);
  EXPECT_THROW(f({3}), DomainError);
}

TEST(BaseMap, RandomDecompositionsStayInBox) {
  FiniteGroup g(fixtures::product({6, 4}));
  BaseMap f(g, {3, 2}, IntBox{{-1, -1}, {1, 1}});
  std::mt19937_64 rng(3);
  for (int t = 0; t < 1000; ++t) {
    long n = 1 + t % 7;
    Point p{std::uniform_int_distribution<long>(-n, n)(rng), std::uniform_int_distribution<long>(-n, n)(rng)};
    auto d = f.random_decomposition(p, n, rng);
    ASSERT_TRUE(d.has_value());
    ASSERT_EQ(d->size(), static_cast<std::size_t>(n));
    Point s{0, 0};
    for (const auto &b : *d) {
      EXPECT_TRUE(f.box().contains(b));
      s[0] += b[0];
      s[1] += b[1];
    }
    EXPECT_EQ(s, p);
  }
  EXPECT_FALSE(f.random_decomposition({5, 0}, 4, rng).has_value());
}

TEST(Ladder, CyclicTwelve) {
  Pipeline p(fixtures::cyclic(12), {6}, IntBox{{-2}, {2}});
  ASSERT_TRUE(p.lad.stable_level.has_value());
  EXPECT_EQ(*p.lad.stable_level, 3);
  EXPECT_TRUE(p.lad.well_defined);
  EXPECT_TRUE(p.lad.images_monotone);
  EXPECT_TRUE(p.lad.g0_subgroup);
  EXPECT_EQ(p.lad.g0.size(), 12u);
  EXPECT_EQ(p.lad.index, 1u);
  EXPECT_EQ(p.lad.lattice, M({{12}}));
  EXPECT_TRUE(p.lad.lattice_meets_box_at_zero);
  EXPECT_TRUE(p.lad.f1_generic);
  EXPECT_EQ(longs(p.q.invariant_factors), (std::vector<long>{12}));
  EXPECT_TRUE(verify_isomorphism(p.f, p.lad, p.q).ok());
  EXPECT_EQ(p.lad.levels[0].image, 5u);
  EXPECT_EQ(p.lad.levels[1].image, 9u);
}

TEST(Ladder, ImageOfBoxIsAlreadyTheGroup) {
  Pipeline p(fixtures::cyclic(5), {2}, IntBox{{-2}, {2}});
  ASSERT_TRUE(p.lad.stable_level.has_value());
  EXPECT_EQ(*p.lad.stable_level, 1);
  EXPECT_TRUE(verify_isomorphism(p.f, p.lad, p.q).ok());
}

TEST(Ladder, SixByFour) {
  Pipeline p(fixtures::product({6, 4}), {3, 2}, IntBox{{-1, -1}, {1, 1}});
  ASSERT_TRUE(p.lad.stable_level.has_value());
  EXPECT_LE(*p.lad.stable_level, 8);
  EXPECT_EQ(p.lad.lattice, M({{6, 0}, {0, 4}}));
  EXPECT_EQ(p.lad.g0.size(), 24u);
  EXPECT_EQ(longs(p.q.invariant_factors), longs(abelian_invariants(p.group)));
  EXPECT_EQ(longs(p.q.invariant_factors), (std::vector<long>{2, 12}));
  EXPECT_TRUE(check_local_lattice({p.f.box(), {{6, 0}, {0, 4}}, 3}).ok());
  EXPECT_TRUE(verify_isomorphism(p.f, p.lad, p.q).ok());
}

TEST(Ladder, TwoTwoFiveWithOneSidedBox) {
  Pipeline p(fixtures::product({2, 2, 5}), {0, 0, 2}, IntBox{{0, 0, -2}, {1, 1, 2}});
  ASSERT_TRUE(p.lad.stable_level.has_value());
  EXPECT_EQ(p.lad.lattice, M({{2, 0, 0}, {0, 2, 0}, {0, 0, 5}}));
  EXPECT_EQ(longs(p.q.invariant_factors), (std::vector<long>{2, 10}));
  EXPECT_EQ(longs(abelian_invariants(p.group)), (std::vector<long>{2, 10}));
  EXPECT_TRUE(verify_isomorphism(p.f, p.lad, p.q).ok());
}

TEST(Ladder, CorruptedLatticeIsRejected) {
  Pipeline p(fixtures::product({6, 4}), {3, 2}, IntBox{{-1, -1}, {1, 1}});
  // (6, 0) dropped in favour of (12, 0): twice too many cosets
  Quotient wrong = quotient(M({{12, 0}, {0, 4}}), 2);
  auto rep = verify_isomorphism(p.f, p.lad, wrong);
  EXPECT_FALSE(rep.ok());
  EXPECT_FALSE(rep.sizes_match);
  EXPECT_NE(rep.detail.find("size mismatch"), std::string::npos);
  EXPECT_THROW(quotient(M({{0, 4}}), 2), DomainError);
}

TEST(Ladder, BudgetExhaustionIsReported) {
  FiniteGroup g(fixtures::cyclic(12));
  BaseMap f(g, {6}, IntBox{{0}, {1}});
  LadderOptions opts;
  opts.budget = 4;
  auto lad = ladder(f, opts);
  EXPECT_FALSE(lad.stable_level.has_value());
  EXPECT_EQ(lad.levels.size(), 4u);
  EXPECT_EQ(lad.trace.back(), "no stabilization within the level budget");
}

TEST(Ladder, WellDefinednessStress) {
  std::mt19937_64 rng(11);
  std::vector<std::unique_ptr<Pipeline>> ps;
  ps.push_back(std::make_unique<Pipeline>(fixtures::cyclic(12), Point{6}, IntBox{{-2}, {2}}));
  ps.push_back(std::make_unique<Pipeline>(fixtures::product({6, 4}), Point{3, 2}, IntBox{{-1, -1}, {1, 1}}));
  for (const auto &p : ps)
    for (const auto &lv : p->lad.levels) EXPECT_EQ(well_definedness_stress(p->f, lv.n, 10000, rng), 0u);
}

TEST(Ladder, RandomProductsMatchClassification) {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 12; ++t) {
    std::vector<long> ms{std::uniform_int_distribution<long>(2, 7)(rng),
                         std::uniform_int_distribution<long>(2, 7)(rng)};
    Point a(2), lo(2), hi(2);
    for (std::size_t i = 0; i < 2; ++i) {
      a[i] = std::uniform_int_distribution<long>(0, ms[i] - 1)(rng);
      // a nontrivial interval around 0 keeping a + b in [0, m)
      lo[i] = -std::uniform_int_distribution<long>(0, a[i])(rng);
      hi[i] = std::uniform_int_distribution<long>(0, ms[i] - 1 - a[i])(rng);
      if (lo[i] == 0 && hi[i] == 0) (a[i] > 0 ? lo[i] : hi[i]) = a[i] > 0 ? -1 : 1;
    }
    Pipeline p(fixtures::product(ms), a, IntBox{lo, hi});
    ASSERT_TRUE(p.lad.stable_level.has_value()) << t;
    EXPECT_TRUE(p.lad.well_defined);
    EXPECT_EQ(p.lad.g0.size(), static_cast<std::size_t>(ms[0] * ms[1]));
    EXPECT_EQ(longs(p.q.invariant_factors), longs(abelian_invariants(p.group)));
    EXPECT_TRUE(verify_isomorphism(p.f, p.lad, p.q).ok()) << t;
  }
}
