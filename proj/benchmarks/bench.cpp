#include <benchmark/benchmark.h>

#include <algorithm>

#include "gilbert/growth.hpp"
#include "gilbert/lattice.hpp"
#include "gilbert/planar_graph.hpp"
#include "gilbert/rng.hpp"
#include "gilbert/sampling.hpp"

using namespace gilbert;

namespace {

SeedSet seeds_for(double side) {
  return sample_poisson(BoxDomain(side), 1.0, MarkDistribution{}, stream_seed(7, 0, "bench"));
}

// Argument: box side N at intensity 1, so about N^2 seeds.
void BM_Simulate(benchmark::State& state) {
  const double side = static_cast<double>(state.range(0));
  const auto seeds = seeds_for(side);
  for (auto _ : state) benchmark::DoNotOptimize(simulate(seeds, side));
  state.counters["seeds"] = static_cast<double>(seeds.size());
  state.SetComplexityN(static_cast<long>(seeds.size()));
}
BENCHMARK(BM_Simulate)->RangeMultiplier(2)->Range(10, 80)->Unit(benchmark::kMillisecond)->Complexity();

void BM_ExtractGraph(benchmark::State& state) {
  const double side = static_cast<double>(state.range(0));
  const auto t = simulate(seeds_for(side), side);
  for (auto _ : state) benchmark::DoNotOptimize(extract_graph(t));
}
BENCHMARK(BM_ExtractGraph)->RangeMultiplier(2)->Range(10, 80)->Unit(benchmark::kMillisecond);

void BM_Oracle(benchmark::State& state) {
  const auto seeds = seeds_for(10.0);
  const double dt = 1.0 / static_cast<double>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(oracle_simulate(seeds, 10.0, dt));
}
BENCHMARK(BM_Oracle)->Arg(100)->Arg(1000)->Unit(benchmark::kMillisecond);

void BM_LatticeRays(benchmark::State& state) {
  const long n = state.range(0);
  lattice::LatticeRayConfig cfg{n, {}};
  Engine rng = make_engine(stream_seed(7, 1, "bench"));
  for (long k = 0; k < n; ++k) {
    const long x = 1 + static_cast<long>(rng() % static_cast<unsigned long>(n - 1));
    const long y = 1 + static_cast<long>(rng() % static_cast<unsigned long>(n - 1));
    if (std::none_of(cfg.seeds.begin(), cfg.seeds.end(),
                     [&](const lattice::LatticeSeed& s) { return s.position == lattice::LatticePoint{x, y}; })) {
      cfg.seeds.push_back({{x, y}, (rng() & 1) ? Direction::Vertical : Direction::Horizontal});
    }
  }
  for (auto _ : state) benchmark::DoNotOptimize(lattice::lattice_ray_simulate(cfg, n));
}
BENCHMARK(BM_LatticeRays)->Arg(20)->Arg(80)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
