#pragma once

#include <cmath>
#include <random>

#include <Eigen/Eigenvalues>

#include "mixedh2/lti.hpp"

namespace mixedh2::testing {

inline StateSpaceSystem scalar(double a, double bu = 1.0, double bw = 1.0) {
  return make_system("scalar", Matrix::Constant(1, 1, a), Matrix::Constant(1, 1, bu), Matrix::Constant(1, 1, bw));
}

inline StateSpaceSystem ac17(const Matrix& Bw) {
  Matrix A(4, 4);
  A << -2.98, 0.93, 0.0, -0.034, -0.99, -0.21, 0.035, -0.001, 0.0, 0.0, 0.0, 1.0, 0.39, -5.55, 0.0, -1.89;
  Matrix Bu(4, 1);
  Bu << -0.032, 0.0, 0.0, -1.6;
  return make_system("AC17", A, Bu, Bw);
}

inline StateSpaceSystem ac17_bu() {
  Matrix Bu(4, 1);
  Bu << -0.032, 0.0, 0.0, -1.6;
  return ac17(Bu);
}

// Random Schur-stable system with spectral radius at most `rho`.
inline StateSpaceSystem random_stable(std::mt19937_64& rng, int n, int du, double rho) {
  std::normal_distribution<double> nd;
  Matrix A(n, n), Bu(n, du), Bw(n, 1);
  for (Eigen::Index i = 0; i < A.size(); ++i) A.data()[i] = nd(rng);
  for (Eigen::Index i = 0; i < Bu.size(); ++i) Bu.data()[i] = nd(rng);
  for (Eigen::Index i = 0; i < Bw.size(); ++i) Bw.data()[i] = nd(rng);
  Eigen::EigenSolver<Matrix> es(A, false);
  const double r = es.eigenvalues().cwiseAbs().maxCoeff();
  A *= rho / r;
  return make_system("random", A, Bu, Bw);
}

inline double max_abs_diff(const std::vector<Complex>& a, const std::vector<Complex>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

// Scalar FIR controller sum_t k_t z^{-t} sampled on a grid.
inline GridSpectrum fir_spectrum(const FrequencyGrid& grid, const std::vector<double>& taps) {
  std::vector<Complex> v(grid.size());
  for (std::size_t k = 0; k < grid.size(); ++k)
    for (std::size_t t = 0; t < taps.size(); ++t) v[k] += taps[t] * std::polar(1.0, -grid.omega(k) * double(t));
  return GridSpectrum::scalar(grid, v);
}

inline std::vector<double> random_taps(std::mt19937_64& rng, int n, double decay) {
  std::normal_distribution<double> nd;
  std::vector<double> k(static_cast<std::size_t>(n));
  for (int t = 0; t < n; ++t) k[static_cast<std::size_t>(t)] = nd(rng) * std::pow(decay, t);
  return k;
}

}  // namespace mixedh2::testing
