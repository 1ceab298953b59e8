#include "oracles.hpp"

#include "pkit/normalize.hpp"
#include "pkit/parser.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace pkit;

TEST(Parse, LinearAtom) {
  Formula f = parse("2*x + a <= 5");
  ASSERT_TRUE(f.is_atom());
  EXPECT_EQ(f.atom().rel, Rel::Le);
  EXPECT_EQ(f.atom().lhs, LinearTerm::var("x", 2) + LinearTerm::var("a"));
  EXPECT_EQ(f.atom().rhs, LinearTerm(5));
}

TEST(Parse, Quantifier) {
  Formula f = parse("exists x. x == 2*y");
  ASSERT_EQ(f.kind(), Kind::Exists);
  EXPECT_EQ(f.bound_var(), "x");
  EXPECT_EQ(f.child(), Formula::rel(Rel::Eq, LinearTerm::var("x"), LinearTerm::var("y", 2)));
  EXPECT_EQ(f.free_vars(), std::set<std::string>{"y"});
}

TEST(Parse, CongruenceAndStrict) {
  Formula f = parse("x === 3 mod 5 and x < y");
  ASSERT_EQ(f.kind(), Kind::And);
  const Atom &c = f.children()[0].atom();
  EXPECT_EQ(c.rel, Rel::Cong);
  EXPECT_EQ(c.modulus, 5);
  EXPECT_EQ(c.rhs, LinearTerm(3));
  EXPECT_EQ(c.lhs, LinearTerm::var("x"));
  EXPECT_EQ(f.children()[1].atom().rel, Rel::Lt);
}

TEST(Parse, Errors) {
  try {
    parse("x <= \n  y +");
    FAIL();
  } catch (const SyntaxError &e) {
    EXPECT_EQ(e.line(), 2);
  }
  EXPECT_THROW(parse("x === 1 mod 1"), SyntaxError);
  EXPECT_THROW(parse("x $ y"), SyntaxError);
  EXPECT_THROW(parse("exists . x == 1"), SyntaxError);
  EXPECT_THROW(parse("x * y <= 1"), SyntaxError);
}

TEST(Parse, ParenthesesAndChains) {
  EXPECT_EQ(parse("(x + 1) <= y"), parse("x + 1 <= y"));
  Formula f = parse("0 <= x <= 100");
  EXPECT_EQ(f, Formula::conj({parse("0 <= x"), parse("x <= 100")}));
  EXPECT_EQ(parse("((x <= y))"), parse("x <= y"));
  EXPECT_EQ(parse("3*(x - y) == 1").atom().lhs, parse_term("3*x - 3*y"));
}

TEST(NormalizeTerm, Examples) {
  EXPECT_EQ(parse_term("x + (x + a) + 1 + 1"), parse_term("2*x + a + 2"));
  EXPECT_EQ(parse_term("(-x) + x"), LinearTerm(0));
  EXPECT_EQ(parse_term("a + a + a + x"), LinearTerm::var("x") + LinearTerm::var("a", 3));
  EXPECT_TRUE(parse_term("(-x) + x").coeffs().empty());
}

namespace {

TermPtr random_term(std::mt19937_64 &rng, int depth) {
  static const char *names[] = {"x", "y", "a"};
  std::uniform_int_distribution<int> pick(0, depth <= 0 ? 1 : 5);
  switch (pick(rng)) {
  case 0: return TermExpr::constant(std::uniform_int_distribution<long>(-9, 9)(rng));
  case 1: return TermExpr::variable(names[std::uniform_int_distribution<int>(0, 2)(rng)]);
  case 2: return TermExpr::add(random_term(rng, depth - 1), random_term(rng, depth - 1));
  case 3: return TermExpr::sub(random_term(rng, depth - 1), random_term(rng, depth - 1));
  case 4: return TermExpr::neg(random_term(rng, depth - 1));
  default:
    return TermExpr::scale(std::uniform_int_distribution<long>(-4, 4)(rng),
                           random_term(rng, depth - 1));
  }
}

LinearTerm random_linear(std::mt19937_64 &rng, const std::vector<std::string> &vars) {
  LinearTerm t(std::uniform_int_distribution<long>(-6, 6)(rng));
  for (const auto &v : vars)
    t += LinearTerm::var(v, std::uniform_int_distribution<long>(-3, 3)(rng));
  return t;
}

Formula random_formula(std::mt19937_64 &rng, int depth) {
  std::vector<std::string> vars{"x", "y", "z"};
  std::uniform_int_distribution<int> pick(0, depth <= 0 ? 1 : 6);
  switch (pick(rng)) {
  case 0: {
    static const Rel rels[] = {Rel::Eq, Rel::Le, Rel::Ge, Rel::Lt, Rel::Gt};
    return Formula::rel(rels[std::uniform_int_distribution<int>(0, 4)(rng)],
                        random_linear(rng, vars), random_linear(rng, vars));
  }
  case 1: {
    Formula c = Formula::cong(random_linear(rng, vars), random_linear(rng, vars),
                              Integer(std::uniform_int_distribution<long>(2, 7)(rng)));
    return c.is_true() ? Formula::truth(true) : c;
  }
  case 2:
  case 3: {
    std::vector<Formula> kids;
    int n = std::uniform_int_distribution<int>(2, 3)(rng);
    for (int i = 0; i < n; ++i) kids.push_back(random_formula(rng, depth - 1));
    return pick(rng) % 2 ? Formula::conj(kids) : Formula::disj(kids);
  }
  case 4: return Formula::negate(random_formula(rng, depth - 1));
  case 5: return Formula::exists(vars[std::uniform_int_distribution<int>(0, 2)(rng)],
                                 random_formula(rng, depth - 1));
  default: return Formula::forall(vars[std::uniform_int_distribution<int>(0, 2)(rng)],
                                  random_formula(rng, depth - 1));
  }
}

} // namespace

TEST(FormulaProperty, PrintParseRoundTrip) {
  std::mt19937_64 rng(2024);
  for (int i = 0; i < 2000; ++i) {
    Formula f = random_formula(rng, 6);
    Formula g = parse(f.str());
    ASSERT_EQ(g, f) << f.str() << "\n" << g.str();
    ASSERT_EQ(g.free_vars(), f.free_vars());
  }
}

TEST(FormulaProperty, NormalizeTermPreservesValue) {
  std::mt19937_64 rng(99);
  std::uniform_int_distribution<long> d(-100, 100);
  for (int i = 0; i < 1000; ++i) {
    TermPtr t = random_term(rng, 5);
    std::map<std::string, Integer> env{{"x", d(rng)}, {"y", d(rng)}, {"a", d(rng)}};
    Assignment menv;
    for (const auto &[k, v] : env) menv[k] = ModelElement(v);
    ASSERT_EQ(ModelElement(eval_raw(*t, env)), normalize_term(*t).eval(menv));
  }
}

TEST(NormalizeAtomic, TwoXLeY) {
  auto cases = normalize_atomic(parse("2*x <= y"), "x");
  ASSERT_EQ(cases.size(), 2u);
  EXPECT_EQ(cases[0].guard, parse("y === 0 mod 2"));
  EXPECT_EQ(cases[0].atom.form, NormalAtom::Form::Le);
  EXPECT_EQ(cases[0].atom.bound, RatAffine::var("y", Rational(1, 2)));
  EXPECT_EQ(cases[1].guard, parse("y === 1 mod 2"));
  EXPECT_EQ(cases[1].atom.bound, RatAffine::var("y", Rational(1, 2)) - RatAffine(Rational(1, 2)));
  Formula back = reassemble(cases, "x");
  oracle::for_each_point({"x", "y"}, -12, 12, [&](const Assignment &env) {
    ASSERT_EQ(eval(back, env), eval(parse("2*x <= y"), env));
  });
}

TEST(NormalizeAtomic, Tautology) {
  auto cases = normalize_atomic(parse("x == x"), "x");
  ASSERT_EQ(cases.size(), 1u);
  EXPECT_TRUE(cases[0].guard.is_true());
  EXPECT_EQ(cases[0].atom.form, NormalAtom::Form::Cong);
  EXPECT_EQ(cases[0].atom.modulus, 1);
}

TEST(NormalizeAtomic, UnsolvableCongruenceExcluded) {
  Formula f = parse("3*x === y mod 6");
  auto cases = normalize_atomic(f, "x");
  for (const auto &c : cases) {
    for (long y = 0; y < 18; ++y) {
      if (y % 3 != 2) continue;
      EXPECT_FALSE(eval(c.guard, {{"y", ModelElement(y)}}));
    }
  }
  Formula back = reassemble(cases, "x");
  oracle::for_each_point({"x", "y"}, 0, 17, [&](const Assignment &env) {
    ASSERT_EQ(eval(back, env), eval(f, env));
  });
}

TEST(NormalizeAtomicProperty, ReassembledEquivalent) {
  std::mt19937_64 rng(5);
  std::vector<std::string> params{"a", "b"};
  static const Rel rels[] = {Rel::Eq, Rel::Le, Rel::Ge, Rel::Lt, Rel::Gt, Rel::Cong};
  for (int i = 0; i < 120; ++i) {
    Rel r = rels[i % 6];
    LinearTerm t = random_linear(rng, params);
    t += LinearTerm::var("x", std::uniform_int_distribution<long>(-4, 4)(rng));
    Formula f = r == Rel::Cong
                    ? Formula::cong(t, LinearTerm(0), Integer(std::uniform_int_distribution<long>(2, 6)(rng)))
                    : Formula::rel(r, t, LinearTerm(0));
    if (!f.is_atom()) continue;
    Formula back = reassemble(normalize_atomic(f, "x"), "x");
    oracle::for_each_point({"x", "a", "b"}, -20, 20, [&](const Assignment &env) {
      ASSERT_EQ(eval(back, env), eval(f, env)) << f.str();
    });
  }
}
