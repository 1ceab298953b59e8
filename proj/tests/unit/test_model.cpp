#include "pkit/eval.hpp"
#include "pkit/model.hpp"
#include "pkit/parser.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace pkit;

namespace {

ModelElement E(const char *s) { return parse_element(s); }

ModelElement random_element(std::mt19937_64 &rng) {
  std::uniform_int_distribution<long> num(-50, 50), den(1, 12), z(-1000, 1000), rk(0, 2);
  std::vector<Rational> q(static_cast<std::size_t>(rk(rng)));
  for (auto &v : q) v = make_rational(num(rng), den(rng));
  return ModelElement(q, z(rng));
}

} // namespace

TEST(Model, LiteralRoundTrip) {
  EXPECT_EQ(E("inf*1/2 + 3"), ModelElement({Rational(1, 2)}, 3));
  EXPECT_EQ(E("inf*1/2 + 3").str(), "inf*1/2 + 3");
  EXPECT_EQ(E("-7"), ModelElement(-7));
  EXPECT_EQ(E("inf"), ModelElement::infinite(1));
  EXPECT_EQ(E("inf2*3 - 1"), ModelElement({0, 3}, -1));
  EXPECT_EQ(E("-inf*2 + inf*2"), ModelElement(0));
  std::mt19937_64 rng(7);
  for (int i = 0; i < 200; ++i) {
    ModelElement e = random_element(rng);
    EXPECT_EQ(parse_element(e.str()), e) << e;
  }
  EXPECT_THROW(E("inf*"), DomainError);
  EXPECT_THROW(E("3 3"), DomainError);
}

TEST(Model, LexOrderInfiniteBeatsFinite) {
  Assignment env{{"x", ModelElement(5)}, {"y", E("inf")}};
  EXPECT_TRUE(eval(parse("x <= y"), env));
  EXPECT_LT(E("inf2*1000000"), E("inf*1/1000000"));
  EXPECT_LT(E("-inf*1/2"), E("-1000000000"));
}

TEST(Model, ResidueOfInfiniteElement) {
  Assignment env{{"x", E("inf*1/2 + 5")}};
  EXPECT_TRUE(eval(parse("x === 2 mod 3"), env));
  // residue rule checked against e - n*(q/n, floor(z/n)) = (0, z mod n)
  ModelElement e = E("inf*1/2 + 5");
  EXPECT_EQ(e - e.div_floor(3) * Integer(3), ModelElement(2));
}

TEST(Model, ComponentwiseInverse) {
  Assignment env{{"x", E("inf + 2")}, {"y", E("-inf - 2")}};
  EXPECT_TRUE(eval(parse("x + y == 0"), env));
}

TEST(Model, Finiteness) {
  EXPECT_TRUE(is_finite(E("1000000000")));
  EXPECT_FALSE(is_finite(E("inf*1/3")));
  EXPECT_TRUE(is_finite(E("inf + 5") - E("inf + 3")));
  EXPECT_EQ(E("inf + 5") - E("inf + 3"), ModelElement(2));
}

TEST(Model, IntervalInfinite) {
  EXPECT_TRUE(interval_infinite(E("0"), E("inf")));
  EXPECT_FALSE(interval_infinite(E("0"), E("1000000")));
  EXPECT_FALSE(interval_infinite(E("inf - 3"), E("inf + 3")));
  EXPECT_THROW(interval_infinite(E("1"), E("0")), DomainError);
}

TEST(ModelProperty, IsZGroupResidues) {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 1000; ++i) {
    ModelElement e = random_element(rng);
    for (long n = 2; n <= 12; ++n) {
      int hits = 0;
      for (long c = 0; c < n; ++c) {
        Assignment env{{"x", e}};
        if (eval(Formula::cong(LinearTerm::var("x"), LinearTerm(c), Integer(n)), env)) ++hits;
      }
      ASSERT_EQ(hits, 1);
      ModelElement r(e.residue(n));
      ModelElement d = (e - r).div_exact(n);
      ASSERT_EQ(d * Integer(n), e - r);
    }
  }
}

TEST(ModelProperty, Discreteness) {
  std::mt19937_64 rng(12);
  std::vector<ModelElement> sample;
  for (int i = 0; i < 300; ++i) sample.push_back(random_element(rng));
  for (const auto &e : sample) {
    ModelElement up = e + ModelElement(1);
    for (const auto &f : sample) ASSERT_FALSE(e < f && f < up);
  }
}

TEST(ModelProperty, StandardEvalMatchesIntegers) {
  std::mt19937_64 rng(13);
  Formula f = parse("2*x - y <= 3 and (x === y mod 4 or not x + y == 7) and x > -5");
  std::uniform_int_distribution<long> d(-40, 40);
  for (int i = 0; i < 2000; ++i) {
    long x = d(rng), y = d(rng);
    bool expect = 2 * x - y <= 3 && ((((x - y) % 4) + 4) % 4 == 0 || x + y != 7) && x > -5;
    Assignment env{{"x", ModelElement(x)}, {"y", ModelElement(y)}};
    ASSERT_EQ(eval(f, env, ModelKind::Standard), expect);
  }
}

TEST(Model, ScaledFloorCeil) {
  ScaledElement s = parse_scaled("inf*1/2 + 7/2");
  EXPECT_EQ(s.floor(), E("inf*1/2 + 3"));
  EXPECT_EQ(s.ceil(), E("inf*1/2 + 4"));
  EXPECT_FALSE(s.in_model());
  EXPECT_EQ((s * Rational(2)).to_model(), E("inf + 7"));
}
