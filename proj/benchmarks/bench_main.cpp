#include <benchmark/benchmark.h>

#include "mixedh2/fixed_point.hpp"
#include "mixedh2/log.hpp"
#include "mixedh2/rational_approx.hpp"
#include "mixedh2/spectral.hpp"

using namespace mixedh2;

namespace {

StateSpaceSystem ac17() {
  Matrix A(4, 4);
  A << -2.98, 0.93, 0.0, -0.034, -0.99, -0.21, 0.035, -0.001, 0.0, 0.0, 0.0, 1.0, 0.39, -5.55, 0.0, -1.89;
  Matrix Bu(4, 1);
  Bu << -0.032, 0.0, 0.0, -1.6;
  return make_system("AC17", A, Bu, Matrix::Ones(4, 1));
}

void BM_Dare(benchmark::State& state) {
  const auto sys = ac17();
  for (auto _ : state) benchmark::DoNotOptimize(solve_lqr_riccati(sys));
}
BENCHMARK(BM_Dare);

void BM_CepstralFactor(benchmark::State& state) {
  const FrequencyGrid grid(static_cast<std::size_t>(state.range(0)));
  Vector N(static_cast<Eigen::Index>(grid.size()));
  for (std::size_t k = 0; k < grid.size(); ++k) N[Eigen::Index(k)] = 2.0 + std::cos(grid.omega(k));
  for (auto _ : state) benchmark::DoNotOptimize(cepstral_factor(N));
}
BENCHMARK(BM_CepstralFactor)->RangeMultiplier(4)->Range(256, 16384);

void BM_PolynomialFactor(benchmark::State& state) {
  CausalPolynomial L{Vector::LinSpaced(state.range(0) + 1, 1.0, 0.1)};
  const auto p = squared_magnitude(L);
  for (auto _ : state) benchmark::DoNotOptimize(polynomial_factor(p));
}
BENCHMARK(BM_PolynomialFactor)->DenseRange(2, 8, 3);

void BM_FixedPointAc17(benchmark::State& state) {
  const SynthesisContext ctx(ac17(), FrequencyGrid(static_cast<std::size_t>(state.range(0))));
  FixedPointConfig cfg;
  cfg.gamma = 60.0;
  cfg.max_iter = 2000;
  for (auto _ : state) benchmark::DoNotOptimize(run_fixed_point(ctx, cfg));
}
BENCHMARK(BM_FixedPointAc17)->Arg(512)->Arg(1024)->Arg(4096)->Unit(benchmark::kMillisecond);

void BM_MinEpsilon(benchmark::State& state) {
  const SynthesisContext ctx(ac17(), FrequencyGrid(1024));
  FixedPointConfig cfg;
  cfg.gamma = 60.0;
  cfg.max_iter = 2000;
  const auto r = run_fixed_point(ctx, cfg);
  const auto N = GridSpectrum::scalar(ctx.grid, r.state.Nspec);
  const int m = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(min_epsilon(N, m));
}
BENCHMARK(BM_MinEpsilon)->Arg(1)->Arg(3)->Arg(6)->Unit(benchmark::kMillisecond);

}  // namespace

int main(int argc, char** argv) {
  set_warning_sink({});
  benchmark::Initialize(&argc, argv);
  if (benchmark::ReportUnrecognizedArguments(argc, argv)) return 1;
  benchmark::RunSpecifiedBenchmarks();
  benchmark::Shutdown();
  return 0;
}
