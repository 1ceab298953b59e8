#include "oracles.hpp"

#include "pkit/geometry.hpp"
#include "pkit/parser.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace pkit;

namespace {

ModelElement E(const char *s) { return parse_element(s); }
ScaledElement S(const char *s) { return parse_scaled(s); }

const Assignment kH{{"H", E("inf")}};

CellDesc only_cell(const char *text, const std::vector<std::string> &vars) {
  auto cells = decompose(parse(text), vars, kH);
  EXPECT_EQ(cells.size(), 1u) << text;
  return cells.at(0);
}

bool equivalent(const Formula &a, const Formula &b, const ConstPool &pool) {
  return decide_equivalent(a, b, pool.with(kH));
}

} // namespace

TEST(Box, AroundMidpointOfInfiniteInterval) {
  CellDesc c = only_cell("0 <= x and x <= H", {"x"});
  Box b = box_around(c, {E("inf*1/2")}, kH);
  ASSERT_EQ(b.size(), 1u);
  EXPECT_EQ(b.sides[0].lo, E("inf*1/4"));
  EXPECT_EQ(b.sides[0].hi, E("inf*3/4"));
  EXPECT_TRUE(b.margins_infinite());
  EXPECT_TRUE(box_inside(b, c, kH));
}

TEST(Box, AroundPointOfSlantedBand) {
  CellDesc c = only_cell("0 <= x and x <= H and x <= y and y <= x + H", {"x", "y"});
  Box b = box_around(c, {E("inf*1/2"), E("inf*3/4")}, kH);
  ASSERT_EQ(b.size(), 2u);
  for (std::size_t i = 0; i < 2; ++i) {
    const ModelElement &a = (*b.anchor)[i];
    EXPECT_EQ(a - b.sides[i].lo, E("inf*1/8"));
    EXPECT_EQ(b.sides[i].hi - a, E("inf*1/8"));
  }
  EXPECT_TRUE(b.margins_infinite());
  EXPECT_TRUE(box_inside(b, c, kH));
}

TEST(Box, IntersectionIsABox) {
  CellDesc c = only_cell("0 <= x and x <= H and 0 <= y and y <= H", {"x", "y"});
  std::vector<ModelElement> a{E("inf*1/2"), E("inf*1/3")};
  Box b1 = box_around(c, a, kH);
  CellDesc c2 = only_cell("-H <= x and x <= H and y <= H and y >= 0 - H", {"x", "y"});
  Box b2 = box_around(c2, a, kH);
  auto both = b1.intersect(b2);
  ASSERT_TRUE(both.has_value());
  EXPECT_TRUE(both->margins_infinite());
  EXPECT_TRUE(box_inside(*both, c, kH));
}

TEST(Box, RejectsPointNearTheBoundary) {
  CellDesc c = only_cell("0 <= x and x <= H", {"x"});
  EXPECT_THROW(box_around(c, {E("5")}, kH), DomainError);
}

TEST(Box, KeepsCongruence) {
  CellDesc c = only_cell("0 <= x and x <= H and x === 1 mod 3", {"x"});
  Box b = box_around(c, {E("inf*1/2 + 1")}, kH);
  EXPECT_EQ(b.sides[0].modulus, 3);
  EXPECT_TRUE(box_inside(b, c, kH));
}

TEST(CBox, GraphCell) {
  CellDesc c = only_cell("0 <= x and x <= H and t == 2*x", {"x", "t"});
  CBox cb = cbox_around(c, {E("inf*1/2"), E("inf")}, kH);
  EXPECT_EQ(cb.free, std::vector<std::size_t>{0});
  EXPECT_TRUE(cb.box.margins_infinite());
  EXPECT_TRUE(cb.contains({E("inf*1/2"), E("inf")}, kH));
  EXPECT_FALSE(cb.contains({E("inf*1/2"), E("inf + 1")}, kH));
  ConstPool pool;
  EXPECT_TRUE(decide_subset(cb.formula(pool), c.formula(), pool.with(kH)));
}

TEST(CBox, OpenCellMatchesBox) {
  CellDesc c = only_cell("0 <= x and x <= H", {"x"});
  std::vector<ModelElement> a{E("inf*1/2")};
  CBox cb = cbox_around(c, a, kH);
  Box b = box_around(c, a, kH);
  EXPECT_EQ(cb.box.sides[0].lo, b.sides[0].lo);
  EXPECT_EQ(cb.box.sides[0].hi, b.sides[0].hi);
}

TEST(Strip, ClearsDenominators) {
  Strip s{{Rational(1, 2), Rational(1, 3)}, S("0"), S("inf")};
  ConstPool pool;
  Formula f = strip_formula(s, {"x", "y"}, pool);
  Formula expected = parse("0 <= 3*x + 2*y and 3*x + 2*y <= 6*H");
  EXPECT_TRUE(equivalent(f, expected, pool)) << f.str();
  EXPECT_TRUE(s.infinite_width());
}

TEST(Strip, ScalingAgreesWithRationalEvaluation) {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<long> num(-9, 9), den(1, 6), coord(-40, 40);
  int checked = 0;
  for (int round = 0; round < 20; ++round) {
    Strip s;
    for (int i = 0; i < 3; ++i) s.coeffs.push_back(make_rational(num(rng), den(rng)));
    Rational lo = make_rational(num(rng) * 3, den(rng));
    Rational hi = lo + make_rational(den(rng) * 5, den(rng));
    s.lower = ScaledElement({}, lo);
    s.upper = ScaledElement({}, hi);
    ConstPool pool;
    std::vector<std::string> vars{"x", "y", "z"};
    Formula f = strip_formula(s, vars, pool);
    for (int k = 0; k < 50; ++k) {
      std::vector<ModelElement> x{coord(rng), coord(rng), coord(rng)};
      Rational v = 0;
      for (int i = 0; i < 3; ++i) v += s.coeffs[i] * Rational(x[i].z());
      bool expected = lo <= v && v <= hi;
      Assignment env = pool.env();
      for (int i = 0; i < 3; ++i) env[vars[i]] = x[i];
      ASSERT_EQ(eval(f, env), expected);
      ASSERT_EQ(s.contains(x), expected);
      ++checked;
    }
  }
  EXPECT_EQ(checked, 1000);
}

TEST(Generators, SingleInfiniteSegment) {
  GeneratorForm g{{E("0")}, {{Rational(1)}}, {E("inf")}};
  Parallelogram p = generators_to_strips(g);
  ASSERT_EQ(p.strips.size(), 1u);
  EXPECT_EQ(p.strips[0].lower, S("0"));
  EXPECT_EQ(p.strips[0].upper, S("inf"));
  EXPECT_TRUE(p.congruences.empty());
}

TEST(Generators, AxisDirections) {
  GeneratorForm g{{E("0"), E("0")}, {{Rational(1), Rational(0)}, {Rational(0), Rational(1)}},
                  {E("inf"), E("inf")}};
  Parallelogram p = generators_to_strips(g);
  ASSERT_EQ(p.strips.size(), 2u);
  ConstPool pool;
  EXPECT_TRUE(equivalent(p.formula({"x", "y"}, pool), g.formula({"x", "y"}, pool), pool));
}

TEST(Generators, SlantedLineHasGraphMap) {
  GeneratorForm g{{E("0"), E("0")}, {{Rational(2), Rational(1)}}, {E("inf")}};
  Parallelogram p = generators_to_strips(g);
  EXPECT_EQ(p.dim(), 1u);
  ConstPool pool;
  Formula sf = p.formula({"x", "y"}, pool), gf = g.formula({"x", "y"}, pool);
  EXPECT_TRUE(equivalent(sf, gf, pool)) << sf.str() << " vs " << gf.str();
  EXPECT_TRUE(p.contains({E("inf*2"), E("inf")}));
  EXPECT_TRUE(p.contains({E("4"), E("2")}));
  EXPECT_FALSE(p.contains({E("3"), E("2")}));
}

TEST(Generators, ShearNeedsLatticeCongruence) {
  // t1 (1,1) + t2 (1,-1) only reaches points with x + y even
  GeneratorForm g{{E("1"), E("0")}, {{Rational(1), Rational(1)}, {Rational(1), Rational(-1)}},
                  {E("inf"), E("inf*1/2")}};
  Parallelogram p = generators_to_strips(g);
  EXPECT_FALSE(p.congruences.empty());
  ConstPool pool;
  EXPECT_TRUE(equivalent(p.formula({"x", "y"}, pool), g.formula({"x", "y"}, pool), pool));
}

TEST(Generators, RejectsDependentDirections) {
  GeneratorForm g{{E("0"), E("0")}, {{Rational(1), Rational(2)}, {Rational(2), Rational(4)}},
                  {E("inf"), E("inf")}};
  EXPECT_THROW(generators_to_strips(g), DomainError);
}

TEST(Bounded, BoxIsOneParallelogram) {
  Formula f = parse("0 <= x and x <= H and 0 <= y and y <= H");
  auto ps = decompose_bounded(f, {"x", "y"}, E("inf*2"), kH);
  EXPECT_EQ(ps.size(), 1u);
}

TEST(Bounded, TriangleNeedsAtMostThree) {
  Formula f = parse("0 <= x and x <= H and x <= y and y <= H");
  auto ps = decompose_bounded(f, {"x", "y"}, E("inf*2"), kH);
  EXPECT_GE(ps.size(), 1u);
  EXPECT_LE(ps.size(), 3u);
  ConstPool pool;
  std::vector<Formula> parts;
  for (const auto &p : ps) parts.push_back(p.formula({"x", "y"}, pool));
  EXPECT_TRUE(equivalent(mk_or(parts), f, pool));
}

TEST(Bounded, TrapezoidWithCongruence) {
  Formula f = parse("0 <= x and x <= H and 0 <= y and y <= x + H and y === 2 mod 5");
  auto ps = decompose_bounded(f, {"x", "y"}, E("inf*3"), kH);
  EXPECT_LE(ps.size(), 4u);
}

TEST(Bounded, RejectsUnboundedSet) {
  EXPECT_THROW(decompose_bounded(parse("0 <= x"), {"x"}, E("inf"), kH), DomainError);
}

TEST(Bounded, StandardSetsAgreeOnGrid) {
  Formula f = parse("0 <= x and x <= 30 and 2*x <= 3*y and y <= 25 and x + y === 1 mod 2");
  auto ps = decompose_bounded(f, {"x", "y"}, E("100"), {});
  oracle::for_each_point({"x", "y"}, -3, 33, [&](const Assignment &env) {
    std::vector<ModelElement> x{env.at("x"), env.at("y")};
    bool any = false;
    for (const auto &p : ps) any = any || p.contains(x);
    ASSERT_EQ(any, eval(f, env));
  });
}

TEST(GenericCenters, SplitsSegment) {
  Parallelogram p;
  p.n = 1;
  p.free = {0};
  p.graph.assign(1, std::nullopt);
  p.strips.push_back(Strip{{Rational(1)}, S("0"), S("inf")});
  auto pieces = split_generic_centers(p);
  ASSERT_EQ(pieces.size(), 2u);
  std::set<ModelElement> centers;
  for (const auto &q : pieces) {
    ASSERT_TRUE(q.center.has_value());
    EXPECT_TRUE(q.is_centered());
    centers.insert((*q.center)[0]);
  }
  EXPECT_EQ(centers, (std::set<ModelElement>{E("inf*1/4"), E("inf*3/4")}));
}

TEST(GenericCenters, BoxGivesFourPieces) {
  Parallelogram p;
  p.n = 2;
  p.free = {0, 1};
  p.graph.assign(2, std::nullopt);
  p.strips.push_back(Strip{{Rational(1), Rational(0)}, S("0"), S("inf")});
  p.strips.push_back(Strip{{Rational(0), Rational(1)}, S("0"), S("inf")});
  auto pieces = split_generic_centers(p);
  EXPECT_EQ(pieces.size(), 4u);
  for (const auto &q : pieces) {
    EXPECT_TRUE(q.is_centered());
    EXPECT_EQ(tuple_dim(*q.center, {}), 2);
  }
}

TEST(GenericCenters, PerturbsWhenCentersAreDefinable) {
  Parallelogram p;
  p.n = 1;
  p.free = {0};
  p.graph.assign(1, std::nullopt);
  p.strips.push_back(Strip{{Rational(1)}, S("0"), S("inf")});
  auto pieces = split_generic_centers(p, {E("inf")});
  ASSERT_EQ(pieces.size(), 2u);
  for (const auto &q : pieces) EXPECT_EQ(tuple_dim(*q.center, {E("inf")}), 1);
}

TEST(Octant, UpperHalfOfStrip) {
  Parallelogram p;
  p.n = 1;
  p.free = {0};
  p.graph.assign(1, std::nullopt);
  p.strips.push_back(Strip{{Rational(1)}, S("0"), S("inf")});
  p.center = std::vector<ModelElement>{E("inf*1/2")};
  Octant o = octant_of(p, {1});
  EXPECT_TRUE(o.contains({E("inf*3/4")}));
  EXPECT_FALSE(o.contains({E("inf*1/4")}));
  ConstPool pool;
  EXPECT_TRUE(decide_subset(o.region.formula({"x"}, pool), p.formula({"x"}, pool), pool.env()));
}

TEST(Octant, RequiresCenter) {
  Parallelogram p;
  p.n = 1;
  p.free = {0};
  p.graph.assign(1, std::nullopt);
  p.strips.push_back(Strip{{Rational(1)}, S("0"), S("inf")});
  EXPECT_THROW(octant_of(p, {1}), DomainError);
}

// x1, x2, x3 and x1 + x2 + x3 - 2a in an octant force x1 + x2 - a into it.
TEST(Octant, ClosureProperty) {
  Parallelogram p;
  p.n = 2;
  p.free = {0, 1};
  p.graph.assign(2, std::nullopt);
  p.strips.push_back(Strip{{Rational(1), Rational(1)}, S("0"), S("40")});
  p.strips.push_back(Strip{{Rational(1), Rational(-2)}, S("-30"), S("30")});
  p.congruences.push_back(LinearCong{{1, 0}, 1, 2});
  p.center = std::vector<ModelElement>{E("11"), E("9")};
  ASSERT_TRUE(p.contains(*p.center));
  std::mt19937_64 rng(11);
  for (int e1 : {-1, 1})
    for (int e2 : {-1, 1}) {
      Octant o = octant_of(p, {e1, e2});
      std::vector<std::vector<ModelElement>> pts;
      oracle::for_each_point({"x", "y"}, -40, 60, [&](const Assignment &env) {
        std::vector<ModelElement> x{env.at("x"), env.at("y")};
        if (o.contains(x)) pts.push_back(x);
      });
      ASSERT_FALSE(pts.empty());
      std::uniform_int_distribution<std::size_t> pick(0, pts.size() - 1);
      const auto &a = *p.center;
      int trials = 0;
      for (int guard = 0; trials < 1000 && guard < 200000; ++guard) {
        const auto &x1 = pts[pick(rng)], &x2 = pts[pick(rng)], &x3 = pts[pick(rng)];
        std::vector<ModelElement> sum3{x1[0] + x2[0] + x3[0] - a[0] - a[0],
                                       x1[1] + x2[1] + x3[1] - a[1] - a[1]};
        if (!o.contains(sum3)) continue;
        ++trials;
        ASSERT_TRUE(o.contains({x1[0] + x2[0] - a[0], x1[1] + x2[1] - a[1]}));
      }
      EXPECT_EQ(trials, 1000);
    }
}
