#include <benchmark/benchmark.h>

#include "generators.hpp"
#include "groups.hpp"
#include "pkit/cells.hpp"
#include "pkit/int_matrix.hpp"
#include "pkit/lattice.hpp"
#include "pkit/parser.hpp"
#include "pkit/qe.hpp"

#include <random>
#include <string>

using namespace pkit;

// exists y. x == m*y + 1: solved through the equality, flat in m
static void BM_EliminateModulus(benchmark::State &state) {
  Formula f = parse("exists y. x == " + std::to_string(state.range(0)) + "*y + 1 and y >= 0");
  for (auto _ : state) benchmark::DoNotOptimize(eliminate(f));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_EliminateModulus)->RangeMultiplier(2)->Range(2, 64)->Complexity();

// exists y. x < m*y < x + m: only bounds on y, so the elimination branches on m residues
static void BM_EliminateBounds(benchmark::State &state) {
  const std::string m = std::to_string(state.range(0));
  Formula f = parse("exists y. x < " + m + "*y and " + m + "*y < x + " + m);
  for (auto _ : state) benchmark::DoNotOptimize(eliminate(f));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_EliminateBounds)->RangeMultiplier(2)->Range(2, 64)->Complexity();

static void BM_EliminateAlternation(benchmark::State &state) {
  Formula f = parse("forall x. exists y. x == 2*y or x == 2*y + 1");
  for (auto _ : state) benchmark::DoNotOptimize(eliminate(f));
}
BENCHMARK(BM_EliminateAlternation);

static void BM_DecomposeRandom(benchmark::State &state) {
  std::mt19937_64 rng(7);
  std::vector<Formula> fs;
  for (int i = 0; i < 16; ++i) fs.push_back(gen::random_qf(rng));
  std::size_t i = 0;
  for (auto _ : state) benchmark::DoNotOptimize(decompose(fs[i++ % fs.size()], {"x", "y"}));
}
BENCHMARK(BM_DecomposeRandom);

static void BM_HermiteNormalForm(benchmark::State &state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<long> d(-50, 50);
  IntMat m(2 * n, IntVec(n));
  for (auto &row : m)
    for (auto &x : row) x = d(rng);
  for (auto _ : state) benchmark::DoNotOptimize(hermite_normal_form(m));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_HermiteNormalForm)->DenseRange(2, 10, 2)->Complexity();

static void BM_LadderCyclic(benchmark::State &state) {
  FiniteGroup g(fixtures::cyclic(state.range(0)));
  BaseMap f(g, {state.range(0) / 2}, IntBox{{-2}, {2}});
  for (auto _ : state) benchmark::DoNotOptimize(ladder(f));
}
BENCHMARK(BM_LadderCyclic)->Arg(12)->Arg(24)->Arg(48);

static void BM_LadderProduct(benchmark::State &state) {
  FiniteGroup g(fixtures::product({6, 4}));
  BaseMap f(g, {3, 2}, IntBox{{-1, -1}, {1, 1}});
  for (auto _ : state) benchmark::DoNotOptimize(ladder(f));
}
BENCHMARK(BM_LadderProduct);

BENCHMARK_MAIN();
