#include <benchmark/benchmark.h>

#include "certhom/polynomial.hpp"
#include "certhom/random.hpp"
#include "certhom/start_systems.hpp"

namespace certhom {
namespace {

// Arguments: number of variables n, common degree d.
PolySystem bench_system(const benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  Rng rng(1);
  return sample_sphere(
      DegreeVector(std::vector<int>(n, static_cast<int>(state.range(1)))), rng);
}

void BM_Evaluate(benchmark::State& state) {
  const PolySystem h = bench_system(state);
  Rng rng(2);
  const CVector z = uniform_sphere_point(h.num_vars(), rng);
  for (auto _ : state) benchmark::DoNotOptimize(evaluate(h, z));
}
BENCHMARK(BM_Evaluate)->Args({1, 4})->Args({1, 10})->Args({2, 2})->Args({3, 3});

void BM_EvaluateWithJacobian(benchmark::State& state) {
  const PolySystem h = bench_system(state);
  Rng rng(2);
  const CVector z = uniform_sphere_point(h.num_vars(), rng);
  CVector value;
  CMatrix jac;
  for (auto _ : state) {
    evaluate_with_jacobian(h, z, value, jac);
    benchmark::DoNotOptimize(jac.data());
  }
}
BENCHMARK(BM_EvaluateWithJacobian)
    ->Args({1, 4})
    ->Args({1, 10})
    ->Args({2, 2})
    ->Args({3, 3});

void BM_BombieriWeylNorm(benchmark::State& state) {
  const PolySystem h = bench_system(state);
  for (auto _ : state) benchmark::DoNotOptimize(bw_norm(h));
}
BENCHMARK(BM_BombieriWeylNorm)->Args({1, 4})->Args({2, 2})->Args({3, 3});

void BM_SampleSphere(benchmark::State& state) {
  const DegreeVector d(
      std::vector<int>(static_cast<std::size_t>(state.range(0)),
                       static_cast<int>(state.range(1))));
  Rng rng(3);
  for (auto _ : state) benchmark::DoNotOptimize(sample_sphere(d, rng));
}
BENCHMARK(BM_SampleSphere)->Args({1, 4})->Args({2, 2});

}  // namespace
}  // namespace certhom
