#include <benchmark/benchmark.h>

#include "lew/hitting.hpp"
#include "lew/kernels.hpp"
#include "lew/lattice.hpp"
#include "lew/loop_erasure.hpp"
#include "lew/monte_carlo.hpp"
#include "lew/rng.hpp"

using namespace lew;

namespace {

std::vector<RowWeights> uniform_rows(int N) {
  return std::vector<RowWeights>(static_cast<size_t>(N), RowWeights{0.25, 0.25, 0.25, 0.25});
}

void BM_SampleWalk(benchmark::State& state) {
  auto g = WeightedDigraph::cylinder(static_cast<int>(state.range(0)), 3, uniform_rows(3));
  LatticePath p;
  uint64_t s = 0;
  for (auto _ : state) {
    RngStream rng(1, s++, 0);
    mc::sample_walk(g, VertexId{0, 0}, rng, 1 << 20, p);
    benchmark::DoNotOptimize(p.vertices.data());
  }
}
BENCHMARK(BM_SampleWalk)->Arg(6)->Arg(24);

void BM_LoopErase(benchmark::State& state) {
  auto g = WeightedDigraph::cylinder(12, 6, uniform_rows(6));
  LatticePath p;
  RngStream rng(7, 1, 0);
  while (!mc::sample_walk(g, VertexId{0, 0}, rng, 1 << 20, p) ||
         p.length() < state.range(0)) {
    RngStream retry(7, static_cast<uint64_t>(p.length()) + 2, 0);
    rng = retry;
  }
  std::vector<VertexId> out;
  for (auto _ : state) {
    loop_erase_vertices(p.vertices, out);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * p.length());
}
BENCHMARK(BM_LoopErase)->Arg(200);

void BM_HittingSolve(benchmark::State& state) {
  const int M = static_cast<int>(state.range(0));
  auto g = WeightedDigraph::cylinder(M, 8, uniform_rows(8));
  std::vector<VertexId> a{{M / 2, 0}, {0, 0}};
  std::vector<VertexId> b{{M / 2, 8}, {0, 8}};
  for (auto _ : state) {
    auto hm = hitting_probability_matrix(g, a, b);
    benchmark::DoNotOptimize(hm.entries.data());
  }
}
BENCHMARK(BM_HittingSolve)->Arg(12)->Arg(48);

void BM_TwistedSolve(benchmark::State& state) {
  auto g = WeightedDigraph::cylinder(12, 6, uniform_rows(6));
  std::vector<VertexId> a{{6, 0}, {0, 0}};
  std::vector<VertexId> b{{6, 6}, {0, 6}};
  for (auto _ : state) {
    auto hm = twisted_hitting_matrix(g, a, b, TwistPhase{-1});
    benchmark::DoNotOptimize(hm.entries.data());
  }
}
BENCHMARK(BM_TwistedSolve);

void BM_AnnulusSum(benchmark::State& state) {
  double nu = 0;
  for (auto _ : state) {
    nu += 1e-4;
    benchmark::DoNotOptimize(kernels::annulus_sum_dual(0.1, 0.5, 0.0, nu).value);
  }
}
BENCHMARK(BM_AnnulusSum);

void BM_JacobiTheta(benchmark::State& state) {
  double z = 0;
  for (auto _ : state) {
    z += 1e-4;
    benchmark::DoNotOptimize(kernels::jacobi_theta(3, std::complex<double>(z, 0), 0.3));
  }
}
BENCHMARK(BM_JacobiTheta);

}  // namespace

BENCHMARK_MAIN();
