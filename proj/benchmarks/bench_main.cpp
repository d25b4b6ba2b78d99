#include <benchmark/benchmark.h>

#include "njstab/corrector.hpp"
#include "njstab/defects.hpp"

using namespace njstab;

namespace {

Element sample(int dim, std::uint64_t seed) {
  Rng rng(seed);
  return rng.element(dim, Distribution::DenseGaussian);
}

AlgebraMap power_scenario(int dim) {
  AlgebraMap truth = inner_derivation(sample(dim, 1));
  Rng rng(2);
  Element e = rng.element(dim, Distribution::Hermitian);
  return perturb(truth, PerturbationSpec::power(0.1, 0.5, e / op_norm(e)));
}

void BM_OpNorm(benchmark::State& state) {
  Element x = sample(static_cast<int>(state.range(0)), 3);
  for (auto _ : state) {
    benchmark::DoNotOptimize(op_norm(x));
  }
}
BENCHMARK(BM_OpNorm)->Arg(2)->Arg(3)->Arg(8);

void BM_CombinedDefect(benchmark::State& state) {
  const int dim = static_cast<int>(state.range(0));
  AlgebraMap f = power_scenario(dim);
  auto cloud = sample_elements({dim, 4, 2.0, Distribution::DenseGaussian, 4});
  UnitScalar mu(Complex(0, 1));
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        combined_defect(f, mu, cloud[0], cloud[1], cloud[2], cloud[3], 3));
  }
}
BENCHMARK(BM_CombinedDefect)->Arg(2)->Arg(3);

void BM_Correct(benchmark::State& state) {
  const int dim = 2;
  AlgebraMap f = power_scenario(dim);
  Element x = sample(dim, 5);
  for (auto _ : state) {
    benchmark::DoNotOptimize(correct(f, x, 1e-10, 60));
  }
}
BENCHMARK(BM_Correct);

void BM_FitTheta(benchmark::State& state) {
  const int dim = 2;
  AlgebraMap f = power_scenario(dim);
  auto cloud = sample_elements({dim, 20, 2.0, Distribution::DenseGaussian, 6});
  ControlFunction shape = ControlFunction::power_sum(1.0, 0.5);
  for (auto _ : state) {
    benchmark::DoNotOptimize(fit_theta_over(f, shape, cloud, 4, 2));
  }
}
BENCHMARK(BM_FitTheta);

}  // namespace

BENCHMARK_MAIN();
