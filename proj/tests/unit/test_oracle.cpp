#include <doctest.h>

#include <random>

#include "mixedh2/errors.hpp"
#include "mixedh2/fixed_point.hpp"
#include "mixedh2/oracle.hpp"
#include "mixedh2/spectral.hpp"
#include "test_support.hpp"

using namespace mixedh2;
using namespace mixedh2::oracle;
using mixedh2::testing::random_stable;
using mixedh2::testing::scalar;

namespace {

ToeplitzTruncation geometric(double a, int horizon) {
  std::vector<Matrix> h;
  for (int t = 0; t <= horizon; ++t) h.push_back(Matrix::Constant(1, 1, std::pow(a, t)));
  return ToeplitzTruncation::from_impulse(h, horizon);
}

std::vector<Complex> monomial(const FrequencyGrid& g, int power) {
  std::vector<Complex> v(g.size());
  for (std::size_t k = 0; k < g.size(); ++k) v[k] = std::polar(1.0, power * g.omega(k));
  return v;
}

}  // namespace

TEST_CASE("Markov H2") {
  auto I = ToeplitzTruncation::zeros(4, 1, 1);
  I.at(0)(0, 0) = 1.0;
  CHECK(markov_h2(I) == 1.0);
  CHECK(markov_h2(geometric(0.5, 128)) == doctest::Approx(std::sqrt(4.0 / 3.0)).epsilon(1e-12));
  CHECK_THROWS_AS(markov_h2(geometric(0.99, 64)), Error);
  try {
    markov_h2(geometric(0.99, 64));
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kTailTooFat);
  }
}

TEST_CASE("Toeplitz H-infinity") {
  auto C = ToeplitzTruncation::zeros(8, 1, 1);
  C.at(0)(0, 0) = -3.0;
  CHECK(toeplitz_hinf(C) == doctest::Approx(3.0).epsilon(1e-10));

  const double h512 = toeplitz_hinf(geometric(0.5, 512));
  CHECK(h512 <= 2.0 + 1e-12);
  CHECK(h512 >= 2.0 * (1.0 - 5e-3));

  // Monotone in the horizon.
  double prev = 0.0;
  for (int T : {32, 64, 128, 256}) {
    const double h = toeplitz_hinf(geometric(0.5, T));
    CHECK(h >= prev - 1e-12);
    prev = h;
  }
}

TEST_CASE("oracle norms agree with grid norms on random closed loops") {
  std::mt19937_64 rng(31);
  for (int i = 0; i < 6; ++i) {
    const auto sys = random_stable(rng, 1 + i % 3, 1, 0.8);
    const SynthesisContext ctx(sys, FrequencyGrid(2048));
    const auto K = h2_controller_realization(sys, ctx.ric);
    const auto T = closed_loop(ctx.plant.F, ctx.plant.G, K.sample(ctx.grid));
    const auto imp = closed_loop_impulse(sys, K, 512);
    CHECK(markov_h2(imp) == doctest::Approx(h2_norm(T)).epsilon(1e-4));
    const double th = toeplitz_hinf(imp), gh = hinf_norm(T, closed_loop_response(sys, K));
    CHECK(th <= gh * (1.0 + 1e-9));
    CHECK(th >= gh * (1.0 - 5e-3));
  }
}

TEST_CASE("oracle norms for the open-loop unstable AC17 plant") {
  const auto sys = mixedh2::testing::ac17(Matrix::Ones(4, 1));
  const SynthesisContext ctx(sys, FrequencyGrid(4096));
  const auto K = h2_controller_realization(sys, ctx.ric);
  const auto T = closed_loop(ctx.plant.F, ctx.plant.G, K.sample(ctx.grid));
  const auto imp = closed_loop_impulse(sys, K, 512);
  CHECK(markov_h2(imp) == doctest::Approx(h2_norm(T)).epsilon(1e-4));
  const double th = toeplitz_hinf(closed_loop_impulse(sys, K, 1024)), gh = hinf_norm(T, closed_loop_response(sys, K));
  CHECK(th <= gh * (1.0 + 1e-9));
  CHECK(th >= gh * (1.0 - 5e-3));
}

TEST_CASE("FFT causal split") {
  const FrequencyGrid g(64);
  const auto down = fft_causal_split(GridSpectrum::scalar(g, monomial(g, -1)));
  const auto up = fft_causal_split(GridSpectrum::scalar(g, monomial(g, 1)));
  for (std::size_t k = 0; k < g.size(); ++k) {
    CHECK(std::abs(down.anticausal[k](0, 0)) < 1e-14);
    CHECK(std::abs(down.causal[k](0, 0) - std::polar(1.0, -g.omega(k))) < 1e-14);
    CHECK(std::abs(up.causal[k](0, 0)) < 1e-14);
    CHECK(std::abs(up.anticausal[k](0, 0) - std::polar(1.0, g.omega(k))) < 1e-14);
  }

  std::mt19937_64 rng(2);
  std::normal_distribution<double> nd;
  std::vector<Complex> v(g.size());
  for (auto& x : v) x = Complex(nd(rng), nd(rng));
  const auto s = fft_causal_split(GridSpectrum::scalar(g, v));
  for (std::size_t k = 0; k < g.size(); ++k) CHECK(std::abs(s.causal[k](0, 0) + s.anticausal[k](0, 0) - v[k]) < 1e-13);
}

TEST_CASE("anticausal part of Delta K_nc matches the closed form for stable plants") {
  std::mt19937_64 rng(4);
  for (int i = 0; i < 4; ++i) {
    const auto sys = i == 0 ? scalar(0.5) : random_stable(rng, i + 1, 1, 0.85);
    const SynthesisContext ctx(sys, FrequencyGrid(2048));
    GridSpectrum dk(ctx.grid, 1, 1);
    for (std::size_t k = 0; k < ctx.grid.size(); ++k) dk[k] = ctx.stat.Delta[k] * ctx.stat.Knc[k];
    const auto split = fft_causal_split(dk);
    double worst = 0.0, scale = 0.0;
    for (std::size_t k = 0; k < ctx.grid.size(); ++k) {
      worst = std::max(worst, std::abs(split.anticausal[k](0, 0) - ctx.stat.SminusBase[k](0, 0)));
      scale = std::max(scale, std::abs(dk[k](0, 0)));
    }
    CHECK(worst < 1e-8 * std::max(1.0, scale));
  }
}

TEST_CASE("unit weight reproduces the H2 controller taps") {
  const auto sys = scalar(0.5);
  const FrequencyGrid grid(1024);
  const auto ones = GridSpectrum::scalar(grid, Vector::Ones(1024));
  const auto w = finite_horizon_weighted_h2(sys, ones, 48);
  const auto k2 = h2_controller_realization(sys, solve_lqr_riccati(sys)).impulse(48);
  for (int t = 0; t < 48; ++t) CHECK(std::abs(w.K_fir.at(t)(0, 0) - k2[std::size_t(t)](0, 0)) < 1e-5);
  CHECK(w.K_fir.causal());
}

TEST_CASE("weighted oracle matches the grid formula for a polynomial weight") {
  const auto sys = scalar(0.5);
  const SynthesisContext ctx(sys, FrequencyGrid(1024));
  Vector N(1024);
  for (Eigen::Index k = 0; k < N.size(); ++k) N[k] = 1.25 + std::cos(ctx.grid.omega(std::size_t(k)));
  const auto L = cepstral_factor(N);
  const auto K = controller_from_dual(ctx, map_F4(L, ctx), L);
  const auto taps = ToeplitzTruncation::from_spectrum(K, 60);
  const auto w = finite_horizon_weighted_h2(sys, GridSpectrum::scalar(ctx.grid, N), 60);
  for (int t = 0; t < 40; ++t) CHECK(std::abs(w.K_fir.at(t)(0, 0) - taps.at(t)(0, 0)) < 1e-4);
}

TEST_CASE("weighted cost matches the grid objective at the converged dual") {
  const auto sys = scalar(0.5);
  const SynthesisContext ctx(sys, FrequencyGrid(1024));
  FixedPointConfig cfg;
  cfg.gamma = ctx.noncausal_bound + 0.3 * (gamma_two(ctx) - ctx.noncausal_bound);
  const auto r = run_fixed_point(ctx, cfg);
  REQUIRE(r.converged());
  const auto Nspec = GridSpectrum::scalar(ctx.grid, r.state.Nspec);
  const Vector s2 = sigma_max_squared(closed_loop(ctx.plant.F, ctx.plant.G, r.K));
  const double grid_cost = s2.dot(r.state.Nspec) / double(ctx.grid.size());
  const auto w = finite_horizon_weighted_h2(sys, Nspec, 64);
  CHECK(w.cost == doctest::Approx(grid_cost).epsilon(1e-3));

  // Any causal FIR perturbation increases the weighted cost.
  std::vector<Matrix> base;
  for (int t = 0; t < 64; ++t) base.push_back(w.K_fir.at(t));
  const double c0 = weighted_cost(sys, Nspec, base);
  CHECK(c0 == doctest::Approx(w.cost).epsilon(1e-9));
  std::mt19937_64 rng(8);
  std::normal_distribution<double> nd;
  for (int i = 0; i < 20; ++i) {
    auto k = base;
    for (auto& m : k) m(0, 0) += 1e-3 * nd(rng);
    CHECK(weighted_cost(sys, Nspec, k) >= c0 - 1e-9);
  }
}

TEST_CASE("weighted oracle preconditions") {
  const auto grid = FrequencyGrid(64);
  const auto ones = GridSpectrum::scalar(grid, Vector::Ones(64));
  CHECK_THROWS_AS(finite_horizon_weighted_h2(scalar(1.2), ones, 8), Error);
  CHECK_THROWS_AS(finite_horizon_weighted_h2(scalar(0.5), ones, 65), Error);
}
