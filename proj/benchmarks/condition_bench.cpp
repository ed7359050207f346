#include <benchmark/benchmark.h>

#include "certhom/projective.hpp"
#include "certhom/start_systems.hpp"

namespace certhom {
namespace {

void BM_ConditionMu(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const InitialPair pair = total_degree(
      DegreeVector(std::vector<int>(n, static_cast<int>(state.range(1)))), 1.0);
  for (auto _ : state)
    benchmark::DoNotOptimize(condition_mu(pair.g, pair.starts[0]));
}
BENCHMARK(BM_ConditionMu)
    ->Args({1, 4})
    ->Args({1, 10})
    ->Args({2, 2})
    ->Args({3, 3});

void BM_ProjectiveNewtonStep(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const InitialPair pair = total_degree(
      DegreeVector(std::vector<int>(n, static_cast<int>(state.range(1)))), 1.0);
  CVector near = pair.starts[0].coords();
  near[0] += Complex(1e-3, 1e-3);
  const ProjectivePoint z(near);
  for (auto _ : state)
    benchmark::DoNotOptimize(projective_newton_step(pair.g, z));
}
BENCHMARK(BM_ProjectiveNewtonStep)->Args({1, 4})->Args({2, 2})->Args({3, 3});

void BM_OptimizeR(benchmark::State& state) {
  const DegreeVector d{2, 2};
  for (auto _ : state) benchmark::DoNotOptimize(optimize_r(d));
}
BENCHMARK(BM_OptimizeR);

}  // namespace
}  // namespace certhom
