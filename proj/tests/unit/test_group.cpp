#include "groups.hpp"
#include "oracles.hpp"

#include "pkit/group.hpp"
#include "pkit/parser.hpp"

#include <gtest/gtest.h>

using namespace pkit;

namespace {

using namespace fixtures;

ModelElement E(const char *s) { return parse_element(s); }

// Generic points over {H}: fresh archimedean classes keep them out of dcl(H).
std::vector<ModelElement> at(const char *s) { return {E(s)}; }

} // namespace

TEST(VerifyGroup, CyclicTwelve) {
  auto rep = verify_group(cyclic(12, 12));
  for (const auto &c : rep.checks) EXPECT_TRUE(c.holds) << c.name;
  ASSERT_TRUE(rep.identity.has_value());
  EXPECT_EQ((*rep.identity)[0], E("0"));
}

TEST(VerifyGroup, MatchesCayleyTableOracle) {
  for (long wrap : {10L, 11L, 12L, 13L}) {
    DefinableGroup g = cyclic(12, wrap);
    auto rep = verify_group(g);
    auto op = [&](long x, long y) { return x + y < 12 ? x + y : x + y - wrap; };
    bool closed = true, assoc = true;
    for (long x = 0; x < 12; ++x)
      for (long y = 0; y < 12; ++y) {
        long p = op(x, y);
        closed = closed && p >= 0 && p < 12;
        for (long z = 0; z < 12; ++z) assoc = assoc && op(op(x, y), z) == op(x, op(y, z));
      }
    bool inverses = true;
    for (long x = 0; x < 12; ++x) {
      bool found = false;
      for (long y = 0; y < 12; ++y) found = found || op(x, y) == 0;
      inverses = inverses && found;
    }
    EXPECT_EQ(rep.get("closure").holds, closed) << wrap;
    if (closed) {
      EXPECT_EQ(rep.get("associative").holds, assoc) << wrap;
    }
    EXPECT_EQ(rep.ok(), closed && assoc && inverses) << wrap;
  }
}

TEST(VerifyGroup, WrapElevenIsAMonoidWithoutInverses) {
  auto rep = verify_group(cyclic(12, 11));
  EXPECT_TRUE(rep.get("associative").holds);
  const auto &inv = rep.get("inverse");
  EXPECT_FALSE(inv.holds);
  ASSERT_TRUE(inv.counterexample.has_value());
  long x = inv.counterexample->at("x").z().get_si();
  EXPECT_GE(x, 1);
}

TEST(VerifyGroup, CorruptedEntryBreaksAssociativity) {
  auto rep = verify_group(corrupted());
  const auto &a = rep.get("associative");
  EXPECT_FALSE(a.holds);
  ASSERT_TRUE(a.counterexample.has_value());
  const Assignment &w = *a.counterexample;
  auto op = [](long x, long y) { return x == 1 && y == 1 ? 3 : (x + y) % 12; };
  long x = w.at("x").z().get_si(), y = w.at("y").z().get_si(), z = w.at("z").z().get_si();
  EXPECT_NE(op(op(x, y), z), op(x, op(y, z)));
}

TEST(VerifyGroup, AdditionModInfinite) {
  auto rep = verify_group(mod_h());
  EXPECT_TRUE(rep.ok());
  EXPECT_TRUE(verify_group(twisted()).ok());
}

TEST(LocalLinearity, ModInfiniteIsAddition) {
  auto ll = local_linearity(mod_h(), at("inf*1/4 + inf2"), at("inf*1/2 + inf3"));
  EXPECT_EQ(ll.M[0][0], 1);
  EXPECT_EQ(ll.N[0][0], 1);
  EXPECT_TRUE(ll.gamma[0] == ScaledElement(E("0")));
  EXPECT_TRUE(ll.box_a.box.margins_infinite());
  EXPECT_TRUE(ll.box_b.box.margins_infinite());
}

TEST(LocalLinearity, TwistedHasConstantShift) {
  auto ll = local_linearity(twisted(), at("inf*1/4 + inf2"), at("inf*1/2 + inf3"));
  EXPECT_EQ(ll.M[0][0], 1);
  EXPECT_EQ(ll.N[0][0], 1);
  EXPECT_TRUE(ll.gamma[0] == ScaledElement(E("-5")));
}

TEST(LocalLinearity, RejectsDefinablePoints) {
  EXPECT_THROW(local_linearity(mod_h(), at("inf*1/4"), at("inf*1/2")), DomainError);
}

TEST(AdditionBox, ModInfinite) {
  DefinableGroup g = mod_h();
  auto b = local_addition_box(g, at("inf*1/2 + inf2"));
  EXPECT_TRUE(b.box.box.margins_infinite());
  EXPECT_EQ(b.center_inverse[0], E("inf*1/2 - inf2"));
  EXPECT_TRUE(b.box.contains(b.center, g.params));
  EXPECT_TRUE(half_box_closed(g, b));
}

TEST(AdditionBox, SubBoxStaysCertified) {
  DefinableGroup g = mod_h();
  auto b = local_addition_box(g, at("inf*1/3 + inf2"));
  AdditionBox sub = b;
  auto &s = sub.box.box.sides[0];
  s.lo = s.lo + (b.center[0] - s.lo).div_floor(3);
  s.hi = s.hi - (s.hi - b.center[0]).div_floor(5);
  ConstPool pool;
  Formula B = addition_box_formula(g, sub, pool);
  auto ai = pool.term(b.center_inverse[0]), a = pool.term(b.center[0]);
  Formula By = rename_free(B, "x", "y");
  Formula body = mk_implies(
      mk_and({B, By, substitute(substitute(g.op, "y", ai), "z", LinearTerm::var("w")),
              substitute(rename_free(g.op, "x", "w"), "z", LinearTerm::var("v"))}),
      Formula::rel(Rel::Eq, LinearTerm::var("v"), LinearTerm::var("x") - a + LinearTerm::var("y")));
  EXPECT_TRUE(decide(mk_forall({"x", "y", "w", "v"}, body), pool.with(g.params)));
}

TEST(AdditionBox, CyclicDeskScale) {
  auto b = local_addition_box(cyclic(12, 12), {E("6")});
  ASSERT_EQ(b.box.box.sides.size(), 1u);
  // x + y - 6 must stay in [0, 11]: the certified radius is at most 2
  EXPECT_LE(b.box.box.sides[0].hi - E("6"), E("2"));
  EXPECT_GE(b.box.box.sides[0].hi - E("6"), E("1"));
}

TEST(Abelian, ModInfiniteIsWholeGroup) {
  DefinableGroup g = mod_h();
  auto r = abelian_finite_index(g, at("inf*1/2 + inf2"));
  EXPECT_TRUE(r.abelian);
  EXPECT_TRUE(r.subgroup_closed);
  EXPECT_TRUE(r.contains_box);
  ASSERT_TRUE(r.dim_group && r.dim_subgroup);
  EXPECT_EQ(*r.dim_group, 1);
  EXPECT_EQ(*r.dim_subgroup, 1);
  Assignment env = r.constants;
  for (const auto &[k, v] : g.params) env[k] = v;
  EXPECT_TRUE(decide_equivalent(r.subgroup, g.carrier, env));
}

TEST(Abelian, RejectsNonGroup) {
  EXPECT_THROW(abelian_finite_index(corrupted(), {E("6")}), DomainError);
}

TEST(Abelian, CyclicDeskScale) {
  auto r = abelian_finite_index(cyclic(12, 12), {E("6")});
  EXPECT_TRUE(r.ok());
}

TEST(CenteredIsomorphism, ModInfinite) {
  EXPECT_TRUE(centered_isomorphism(mod_h(), at("inf*1/2 + inf2")));
  EXPECT_TRUE(centered_isomorphism(cyclic(12, 12), {E("5")}));
}

TEST(FiniteGroup, CayleyTable) {
  FiniteGroup fg(cyclic(12, 12));
  ASSERT_EQ(fg.size(), 12u);
  EXPECT_EQ(fg.elements()[fg.identity()], std::vector<long>{0});
  for (std::size_t a = 0; a < 12; ++a)
    for (std::size_t b = 0; b < 12; ++b)
      EXPECT_EQ(fg.elements()[fg.mul(a, b)][0], (fg.elements()[a][0] + fg.elements()[b][0]) % 12);
}

TEST(Generic, FiniteExamples) {
  FiniteGroup fg(cyclic(12, 12));
  auto single = is_generic_finite(fg, parse("x == 0"), {"x"});
  EXPECT_TRUE(single.generic);
  EXPECT_EQ(single.translates.size(), 12u);
  auto empty = is_generic_finite(fg, parse("x < 0"), {"x"});
  EXPECT_FALSE(empty.generic);
  auto half = is_generic_finite(fg, parse("x < 6"), {"x"});
  EXPECT_TRUE(half.generic);
  EXPECT_EQ(half.translates.size(), 2u);
}


TEST(FiniteProducts, VerifyAndAbelianize) {
  for (const auto &ms : std::vector<std::vector<long>>{{6, 4}, {2, 2, 5}}) {
    DefinableGroup g = product(ms);
    EXPECT_TRUE(verify_group(g).ok());
    std::vector<ModelElement> a;
    for (long m : ms) a.push_back(ModelElement(m / 2));
    auto r = abelian_finite_index(g, a);
    EXPECT_TRUE(r.ok());
    FiniteGroup fg(g);
    long order = 1;
    for (long m : ms) order *= m;
    EXPECT_EQ(fg.size(), static_cast<std::size_t>(order));
  }
}
