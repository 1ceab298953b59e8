#include "oracles.hpp"

#include "pkit/parser.hpp"
#include "pkit/qe.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace pkit;

namespace {

// Compares eliminate(f) against the windowed oracle on a grid.
void expect_equivalent(const Formula &f, long lo, long hi, long window) {
  Formula g = eliminate(f);
  ASSERT_TRUE(g.is_quantifier_free()) << g.str();
  auto vars = oracle::vars_of(f);
  for (const auto &v : g.free_vars()) ASSERT_TRUE(f.free_vars().count(v)) << v;
  oracle::FastFormula ref(f, vars, window);
  oracle::FastFormula out(g, vars, window);
  std::vector<long> vals(vars.size());
  std::function<void(std::size_t)> rec = [&](std::size_t i) {
    if (i == vars.size()) {
      ASSERT_EQ(out(vals), ref(vals)) << f.str() << "  vs  " << g.str();
      return;
    }
    for (long v = lo; v <= hi; ++v) {
      vals[i] = v;
      rec(i + 1);
    }
  };
  rec(0);
}

} // namespace

TEST(Eliminate, EvenNumbers) {
  Formula g = eliminate(parse("exists x. y == 2*x"));
  EXPECT_EQ(g, parse("y === 0 mod 2"));
  expect_equivalent(parse("exists x. y == 2*x"), -20, 20, 20);
}

TEST(Eliminate, PointInterval) {
  EXPECT_TRUE(eliminate(parse("exists x. x >= y and x <= y")).is_true());
}

TEST(Eliminate, OddBetween) {
  Formula f = parse("exists x. y < 2*x and 2*x < y + 2");
  EXPECT_EQ(eliminate(f), parse("y === 1 mod 2"));
  expect_equivalent(f, -20, 20, 20);
}

TEST(Decide, Examples) {
  EXPECT_TRUE(decide(parse("forall y. exists x. y == 2*x or y == 2*x + 1")));
  EXPECT_FALSE(decide(parse("exists x. x < x")));
  EXPECT_TRUE(decide(parse("exists x. x === 0 mod 2 and x === 1 mod 3 and 0 < x and x < 6")));
  EXPECT_FALSE(decide(parse("exists x. x === 0 mod 2 and x === 1 mod 3 and 0 < x and x < 4")));
}

TEST(Decide, WithInfiniteParameters) {
  Assignment p{{"H", parse_element("inf")}};
  EXPECT_TRUE(decide(parse("exists x. 0 < x and x < H and x === 3 mod 7"), p));
  EXPECT_FALSE(decide(parse("exists x. H < x and x < H + 1"), p));
  EXPECT_TRUE(decide(parse("exists x. 2*x == H"), p));
  Assignment q{{"H", parse_element("inf + 1")}};
  EXPECT_FALSE(decide(parse("exists x. 2*x == H"), q));
  EXPECT_THROW(decide(parse("x <= H"), p), DomainError);
}

TEST(Satisfiable, Examples) {
  auto w = satisfiable(parse("x === 3 mod 4 and 10 <= x"));
  ASSERT_TRUE(w);
  EXPECT_EQ(w->at("x"), ModelElement(11));
  EXPECT_FALSE(satisfiable(parse("x < x")));
  auto w2 = satisfiable(parse("x + y == 1 and x === 0 mod 2"));
  ASSERT_TRUE(w2);
  EXPECT_EQ(w2->at("x"), ModelElement(0));
  EXPECT_EQ(w2->at("y"), ModelElement(1));
}

TEST(Satisfiable, InfiniteWitness) {
  Assignment p{{"H", parse_element("inf")}};
  auto w = satisfiable(parse("H - 5 < x and x < H and x === 2 mod 3"), p);
  ASSERT_TRUE(w);
  Assignment env = p;
  env["x"] = w->at("x");
  EXPECT_TRUE(eval(parse("H - 5 < x and x < H and x === 2 mod 3"), env));
}

TEST(CrtMerge, Examples) {
  auto a = crt_merge({{2, 0}, {3, 1}});
  ASSERT_TRUE(a);
  EXPECT_EQ(a->first, 6);
  EXPECT_EQ(a->second, 4);
  EXPECT_FALSE(crt_merge({{4, 1}, {2, 0}}));
  auto c = crt_merge({{5, 2}});
  ASSERT_TRUE(c);
  EXPECT_EQ(c->first, 5);
  EXPECT_EQ(c->second, 2);
}

TEST(CrtMergeProperty, MatchesEnumeration) {
  for (long n1 = 1; n1 <= 12; ++n1)
    for (long n2 = 1; n2 <= 12; ++n2)
      for (long c1 = 0; c1 < n1; ++c1)
        for (long c2 = 0; c2 < n2; ++c2) {
          auto m = crt_merge({{n1, c1}, {n2, c2}});
          long L = std::lcm(n1, n2);
          for (long x = 0; x < L; ++x) {
            bool both = x % n1 == c1 && x % n2 == c2;
            bool merged = m && x % m->first.get_si() == m->second.get_si();
            ASSERT_EQ(both, merged);
          }
        }
}

TEST(EliminateProperty, Idempotent) {
  const char *cases[] = {
      "exists x. y < 3*x and 3*x < z",
      "forall x. x < y or x > z or x === 1 mod 2",
      "exists x. exists w. x + w == y and 0 <= x and x <= 4 and w === 2 mod 3",
  };
  for (const char *c : cases) {
    Formula g = eliminate(parse(c));
    EXPECT_EQ(eliminate(g), g) << c;
  }
}

TEST(EliminateProperty, ConsistentWithSatisfiable) {
  const char *cases[] = {
      "x === 3 mod 4 and 10 <= x and x <= 13",
      "2*x + 3*y == 7 and 0 <= x and x <= 5",
      "x < y and y < x + 1",
      "x === 1 mod 2 and x === 0 mod 4",
      "3*x - 2*y == 1 and y === 1 mod 5 and x > 10",
  };
  for (const char *c : cases) {
    Formula f = parse(c);
    auto vars = oracle::vars_of(f);
    bool d = decide(mk_exists(vars, f));
    auto w = satisfiable(f);
    EXPECT_EQ(d, w.has_value()) << c;
    if (w) {
      EXPECT_TRUE(eval(f, *w)) << c;
    }
  }
}

TEST(EliminateProperty, RandomSingleQuantifier) {
  std::mt19937_64 rng(31);
  std::uniform_int_distribution<long> co(-3, 3), cst(-8, 8), md(2, 4);
  for (int i = 0; i < 40; ++i) {
    auto lin = [&] {
      LinearTerm t(cst(rng));
      t += LinearTerm::var("x", co(rng));
      t += LinearTerm::var("y", co(rng));
      return t;
    };
    std::vector<Formula> parts;
    parts.push_back(Formula::rel(Rel::Le, lin(), LinearTerm(0)));
    parts.push_back(Formula::rel(Rel::Ge, lin(), LinearTerm(0)));
    parts.push_back(mk_or({Formula::cong(lin(), LinearTerm(0), Integer(md(rng))),
                           Formula::rel(Rel::Eq, lin(), LinearTerm(0))}));
    Formula f = i % 2 ? Formula::exists("x", mk_and(parts))
                      : Formula::forall("x", mk_or(parts));
    expect_equivalent(f, -15, 15, 80);
  }
}

TEST(Eliminate, BudgetIsEnforced) {
  QeOptions tiny;
  tiny.node_budget = 5;
  EXPECT_THROW(eliminate(parse("exists x. y < 3*x and 3*x < z and x === 1 mod 5"), tiny),
               ResourceLimit);
}
