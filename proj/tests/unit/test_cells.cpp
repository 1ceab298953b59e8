#include "generators.hpp"
#include "oracles.hpp"

#include "pkit/cells.hpp"
#include "pkit/parser.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace pkit;

namespace {

ModelElement E(const char *s) { return parse_element(s); }

// Every grid point lies in f exactly when it lies in exactly one cell.
void expect_partition_on_grid(const Formula &f, const std::vector<CellDesc> &cells,
                              const std::vector<std::string> &vars, long lo, long hi) {
  oracle::for_each_point(vars, lo, hi, [&](const Assignment &env) {
    int hits = 0;
    for (const auto &c : cells) hits += eval(c.formula(), env);
    ASSERT_LE(hits, 1);
    ASSERT_EQ(hits == 1, eval(f, env)) << f.str();
  });
}

} // namespace

TEST(Decompose, EvenNumbersInRange) {
  Formula f = parse("0 <= x and x <= 100 and x === 0 mod 2");
  auto cells = decompose(f, {"x"});
  ASSERT_EQ(cells.size(), 1u);
  EXPECT_EQ(cells[0].signature(), std::vector<int>{1});
  EXPECT_EQ(cells[0].coords[0].modulus, 2);
  EXPECT_TRUE(certify_partition(f, cells).ok());
}

TEST(Decompose, BandAboveDiagonal) {
  Formula f = parse("0 <= x and x <= 100 and x <= y and y <= x + 50 and y === 1 mod 3");
  auto cells = decompose(f, {"x", "y"});
  ASSERT_EQ(cells.size(), 1u);
  EXPECT_EQ(cells[0].signature(), (std::vector<int>{1, 1}));
  EXPECT_TRUE(certify_partition(f, cells).ok());
  expect_partition_on_grid(f, cells, {"x", "y"}, -5, 160);
}

TEST(Decompose, LineIsGraphCell) {
  Formula f = parse("y == 2*x and 0 <= x and x <= 100");
  auto cells = decompose(f, {"x", "y"});
  ASSERT_EQ(cells.size(), 1u);
  EXPECT_EQ(cells[0].signature(), (std::vector<int>{1, 0}));
  EXPECT_EQ(*dim(f), 1);
}

TEST(Decompose, SmallFibresBecomePoints) {
  Formula f = parse("0 <= x and x <= 3");
  auto cells = decompose(f, {"x"});
  EXPECT_EQ(cells.size(), 4u);
  for (const auto &c : cells) EXPECT_EQ(c.dim(), 0);
  EXPECT_EQ(*dim(f), 0);
  EXPECT_TRUE(certify_partition(f, cells).ok());
}

TEST(Decompose, EmptySet) {
  EXPECT_TRUE(decompose(parse("x < 0 and x > 0"), {"x"}).empty());
  EXPECT_FALSE(dim(parse("x < 0 and x > 0")).has_value());
}

TEST(Dim, Examples) {
  EXPECT_EQ(*dim(parse("0 <= x and x <= 100 and 0 <= y and y <= 100")), 2);
  EXPECT_EQ(*dim(parse("x == 5 and y == 7")), 0);
  EXPECT_EQ(*dim(parse("exists z. x == 2*z and y == 3*z")), 1);
  EXPECT_EQ(*dim(parse("x + y + z == 0")), 2);
}

TEST(Decompose, InfiniteParameter) {
  Assignment p{{"H", E("inf")}};
  Formula f = parse("0 <= x and x <= H - 1 and x === 0 mod 2");
  auto cells = decompose(f, {"x"}, p);
  ASSERT_EQ(cells.size(), 1u);
  EXPECT_TRUE(cells[0].coords[0].unbounded_fibers);
  EXPECT_TRUE(certify_partition(f, cells, p).ok());

  Formula g = parse("H - 20 <= x and x <= H");
  auto cells2 = decompose(g, {"x"}, p);
  ASSERT_EQ(cells2.size(), 1u);
  EXPECT_FALSE(cells2[0].coords[0].unbounded_fibers);
}

TEST(DecomposeFunction, FloorHalf) {
  auto pieces = decompose_function(parse("2*t <= x and x <= 2*t + 1"), {"x"}, "t");
  ASSERT_EQ(pieces.size(), 2u);
  for (const auto &p : pieces) {
    ASSERT_EQ(p.domain.coords.size(), 1u);
    EXPECT_EQ(p.domain.coords[0].modulus, 2);
    for (long x = -9; x <= 9; ++x) {
      if (((x % 2) + 2) % 2 != p.domain.coords[0].residue) continue;
      EXPECT_EQ(p.function.eval({ModelElement(x)}), ModelElement(floor_div(x, 2)));
    }
  }
}

TEST(DecomposeFunction, AbsoluteValue) {
  auto pieces = decompose_function(parse("(x >= 0 and t == x) or (x < 0 and t == -x)"), {"x"}, "t");
  EXPECT_EQ(pieces.size(), 2u);
  for (long x = -20; x <= 20; ++x) {
    int hits = 0;
    for (const auto &p : pieces) {
      Assignment env{{"x", ModelElement(x)}};
      if (!eval(p.domain.formula(), env)) continue;
      ++hits;
      EXPECT_EQ(p.function.eval({ModelElement(x)}), ModelElement(std::abs(x)));
    }
    EXPECT_EQ(hits, 1) << x;
  }
}

TEST(DecomposeFunction, RejectsRelation) {
  try {
    decompose_function(parse("t <= x"), {"x"}, "t");
    FAIL();
  } catch (const NotFunctional &e) {
    const auto &w = e.witness();
    EXPECT_TRUE(w.count("x") && w.count("t") && w.count("t'"));
    EXPECT_LE(w.at("t"), w.at("x"));
    EXPECT_LE(w.at("t'"), w.at("x"));
    EXPECT_NE(w.at("t"), w.at("t'"));
  }
}

TEST(InDcl, Examples) {
  auto a = in_dcl(E("inf*1/2"), {E("inf")});
  ASSERT_TRUE(a);
  EXPECT_EQ(a->eval({E("inf")}), E("inf*1/2"));
  EXPECT_EQ(a->k[0], 2);
  EXPECT_FALSE(in_dcl(E("inf"), {ModelElement(5)}));
  auto b = in_dcl(ModelElement(7), {ModelElement(3)});
  ASSERT_TRUE(b);
  EXPECT_EQ(b->s[0], 2);
  EXPECT_EQ(b->gamma, RatAffine(1));
  EXPECT_TRUE(in_dcl(E("inf2*3 + inf - 4"), {E("inf"), E("inf2")}));
  EXPECT_FALSE(in_dcl(E("inf2"), {E("inf")}));
}

TEST(InDclProperty, RandomCombinations) {
  std::mt19937_64 rng(77);
  std::uniform_int_distribution<long> c(-6, 6), z(-50, 50);
  for (int i = 0; i < 300; ++i) {
    std::vector<ModelElement> ps{E("inf + 3"), E("inf2*2 - 1"), ModelElement(z(rng))};
    ModelElement b = ModelElement({make_rational(c(rng), 3), make_rational(c(rng), 2)}, z(rng));
    auto f = in_dcl(b, ps);
    ASSERT_TRUE(f) << b;
    ASSERT_EQ(f->eval(ps), b);
    ModelElement out({0, 0, 1}, 0);
    ASSERT_FALSE(in_dcl(b + out, ps));
  }
}

TEST(GenericPoint, InfiniteSquare) {
  Assignment p{{"H", E("inf")}};
  Formula f = parse("0 <= x and x <= H and 0 <= y and y <= H");
  auto cells = decompose(f, {"x", "y"}, p);
  ASSERT_EQ(cells.size(), 1u);
  auto pt = generic_point(cells[0], p);
  ASSERT_EQ(pt.size(), 2u);
  EXPECT_TRUE(cell_contains(cells[0], pt, p));
  EXPECT_EQ(tuple_dim(pt, {E("inf")}), 2);
}

TEST(GenericPoint, FiniteWidthRejected) {
  Formula f = parse("0 <= x and x <= 100");
  auto cells = decompose(f, {"x"});
  ASSERT_EQ(cells.size(), 1u);
  EXPECT_THROW(generic_point(cells[0]), DomainError);
  auto open = decompose(parse("x >= 4"), {"x"});
  ASSERT_EQ(open.size(), 1u);
  auto pt = generic_point(open[0]);
  EXPECT_EQ(tuple_dim(pt, {}), 1);
}

using gen::random_qf;

TEST(DecomposeProperty, RandomFormulasPartitionGrid) {
  std::mt19937_64 rng(4242);
  for (int i = 0; i < 60; ++i) {
    Formula f = random_qf(rng);
    auto cells = decompose(f, {"x", "y"});
    auto rep = certify_partition(f, cells);
    ASSERT_TRUE(rep.ok()) << f.str();
    expect_partition_on_grid(f, cells, {"x", "y"}, -12, 12);
  }
}

TEST(DecomposeProperty, GraphValuesIntegralOnCells) {
  std::mt19937_64 rng(99);
  for (int i = 0; i < 40; ++i) {
    Formula f = random_qf(rng);
    auto cells = decompose(f, {"x", "y"});
    oracle::for_each_point({"x", "y"}, -10, 10, [&](const Assignment &env) {
      for (const auto &c : cells) {
        if (!eval(c.formula(), env)) continue;
        for (std::size_t j = 0; j < c.coords.size(); ++j) {
          const auto &co = c.coords[j];
          if (!co.is_interval()) {
            ASSERT_TRUE(co.value.eval(env).in_model());
          }
          if (co.lower) {
            ASSERT_TRUE(co.lower->eval(env).in_model());
          }
          if (co.upper) {
            ASSERT_TRUE(co.upper->eval(env).in_model());
          }
        }
      }
    });
  }
}
