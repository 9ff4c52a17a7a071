#include <doctest.h>

#include <numbers>
#include <random>

#include "../../core/src/fft.hpp"
#include "mixedh2/errors.hpp"
#include "mixedh2/log.hpp"
#include "mixedh2/spectral.hpp"
#include "test_support.hpp"

using namespace mixedh2;

namespace {

Vector sample(const FrequencyGrid& g, double (*f)(double)) {
  Vector v(static_cast<Eigen::Index>(g.size()));
  for (std::size_t k = 0; k < g.size(); ++k) v[static_cast<Eigen::Index>(k)] = f(g.omega(k));
  return v;
}

// Taylor coefficients of the sampled factor (lag t at index t).
std::vector<Complex> lags(const std::vector<Complex>& L) { return detail::coefficients(L); }

CausalPolynomial random_min_phase(std::mt19937_64& rng, int m) {
  std::uniform_real_distribution<double> rad(0.05, 0.9), ang(0.0, std::numbers::pi);
  std::vector<Complex> roots;
  while (static_cast<int>(roots.size()) < m) {
    const double r = rad(rng), a = ang(rng);
    if (m - static_cast<int>(roots.size()) >= 2 && a > 0.3) {
      roots.push_back(std::polar(r, a));
      roots.push_back(std::polar(r, -a));
    } else {
      roots.push_back(a > 0.5 * std::numbers::pi ? -r : r);
    }
  }
  CVector l = CVector::Zero(m + 1);
  l[0] = 1.0;
  for (int i = 0; i < m; ++i)
    for (int k = i + 1; k >= 1; --k) l[k] -= roots[static_cast<std::size_t>(i)] * l[k - 1];
  std::uniform_real_distribution<double> gain(0.5, 2.0);
  return CausalPolynomial{l.real() * gain(rng)};
}

}  // namespace

TEST_CASE("constant spectrum factors to one") {
  const auto L = cepstral_factor(Vector::Ones(64));
  for (const auto& v : L) CHECK(std::abs(v - 1.0) < 1e-15);
}

TEST_CASE("cepstral factor of 1.25 + cos w") {
  const FrequencyGrid g(256);
  const auto L = cepstral_factor(sample(g, [](double w) { return 1.25 + std::cos(w); }));
  const auto c = lags(L);
  CHECK(std::abs(c[0] - 1.0) < 1e-12);
  CHECK(std::abs(c[1] - 0.5) < 1e-12);
  double rest = 0.0;
  for (std::size_t t = 2; t < c.size(); ++t) rest = std::max(rest, std::abs(c[t]));
  CHECK(rest < 1e-12);
}

TEST_CASE("boundary zero is lifted before factoring") {
  // 2 + 2 cos w vanishes at pi; the lifted factor is close to 1 + z^-1. The
  // lift of 4e-10 moves the root to about 1 - 2e-5, which bounds the accuracy.
  auto saved = set_warning_sink({});
  for (const auto& [size, tol] : {std::pair{4096, 1e-3}, std::pair{65536, 1e-5}}) {
    const FrequencyGrid g(static_cast<std::size_t>(size));
    const auto c = lags(cepstral_factor(sample(g, [](double w) { return 2.0 + 2.0 * std::cos(w); })));
    CHECK(std::abs(c[0] - 1.0) < tol);
    CHECK(std::abs(c[1] - 1.0) < tol);
    CHECK(std::abs(c[2]) < tol);
  }
  set_warning_sink(std::move(saved));
}

TEST_CASE("grid factor is causal, positive at infinity and matches magnitude") {
  const FrequencyGrid g(1024);
  const Vector N = sample(g, [](double w) { return 1.0 + std::exp(std::cos(w)) + 0.3 * std::sin(3 * w) * std::sin(3 * w); });
  const GridSpectrum Ls = spectral_factor_grid(GridSpectrum::scalar(g, N));
  const auto L = Ls.scalar_values();
  double err = 0.0;
  for (std::size_t k = 0; k < L.size(); ++k) err = std::max(err, std::abs(std::norm(L[k]) - N[static_cast<Eigen::Index>(k)]));
  CHECK(err < 1e-12 * N.maxCoeff());
  const auto c = lags(L);
  double total = 0.0, anti = 0.0;
  for (std::size_t t = 0; t < c.size(); ++t) {
    total += std::norm(c[t]);
    if (t > c.size() / 2) anti += std::norm(c[t]);
  }
  CHECK(anti <= 1e-10 * total);
  CHECK(c[0].real() > 0.0);
  CHECK(std::abs(c[0].imag()) < 1e-14);
}

TEST_CASE("non-positive spectra are rejected") {
  Vector N = Vector::Ones(32);
  N[3] = -0.5;
  CHECK_THROWS_AS(cepstral_factor(N), Error);
  try {
    cepstral_factor(N);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kNonPositiveSpectrum);
  }
}

TEST_CASE("polynomial factor hand examples") {
  auto L0 = polynomial_factor(LaurentPolynomial{Vector::Constant(1, 9.0)});
  CHECK(L0.order() == 0);
  CHECK(L0.coeffs[0] == doctest::Approx(3.0));

  auto L1 = polynomial_factor(LaurentPolynomial{(Vector(2) << 1.25, 0.5).finished()});
  CHECK(L1.coeffs[0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(L1.coeffs[1] == doctest::Approx(0.5).epsilon(1e-12));

  // |1 + 0.25 z^-2|^2 = 1.0625 + 0.5 cos 2w.
  auto L2 = polynomial_factor(LaurentPolynomial{(Vector(3) << 1.0625, 0.0, 0.25).finished()});
  REQUIRE(L2.order() == 2);
  CHECK(L2.coeffs[0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(std::abs(L2.coeffs[1]) < 1e-12);
  CHECK(L2.coeffs[2] == doctest::Approx(0.25).epsilon(1e-12));

  // 1.0625 + 0.25 cos 2w = |a + b z^-2|^2 with a^2 + b^2 = 1.0625, a b = 0.125.
  auto L3 = polynomial_factor(LaurentPolynomial{(Vector(3) << 1.0625, 0.0, 0.125).finished()});
  const double a = std::sqrt(0.5 * (1.0625 + std::sqrt(1.0625 * 1.0625 - 4.0 * 0.125 * 0.125)));
  CHECK(L3.coeffs[0] == doctest::Approx(a).epsilon(1e-12));
  CHECK(std::abs(L3.coeffs[1]) < 1e-12);
  CHECK(L3.coeffs[2] == doctest::Approx(0.125 / a).epsilon(1e-12));
}

TEST_CASE("polynomial factor rejects non-positive input") {
  try {
    polynomial_factor(LaurentPolynomial{(Vector(2) << 0.5, 0.5).finished()});
    FAIL("expected NotPositive");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kNotPositive);
  }
}

TEST_CASE("round trip through squared magnitude") {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 100; ++trial) {
    const int m = 1 + trial % 8;
    const CausalPolynomial L = random_min_phase(rng, m);
    const CausalPolynomial back = polynomial_factor(squared_magnitude(L));
    REQUIRE(back.order() == m);
    CHECK((back.coeffs - L.coeffs).cwiseAbs().maxCoeff() < 1e-7 * L.coeffs.cwiseAbs().maxCoeff());
    CHECK(back.roots().cwiseAbs().maxCoeff() < 1.0);
  }
}

TEST_CASE("grid and polynomial factors agree; inverse factor is bounded") {
  std::mt19937_64 rng(99);
  const FrequencyGrid g(1024);
  for (int trial = 0; trial < 20; ++trial) {
    const LaurentPolynomial p = squared_magnitude(random_min_phase(rng, 1 + trial % 6));
    const auto Lg = cepstral_factor(p.sample(g));
    const CausalPolynomial Lp = polynomial_factor(p);
    double err = 0.0, inv = 0.0;
    for (std::size_t k = 0; k < g.size(); ++k) {
      err = std::max(err, std::abs(Lg[k] - Lp(g.omega(k))));
      inv = std::max(inv, 1.0 / std::abs(Lg[k]));
    }
    CHECK(err < 1e-6 * std::sqrt(p.sample(g).maxCoeff()));
    CHECK(inv <= 1.0 / std::sqrt(p.sample(g).minCoeff()) + 1e-6);
  }
}
