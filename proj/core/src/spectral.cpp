#include "mixedh2/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "fft.hpp"
#include "mixedh2/errors.hpp"
#include "mixedh2/log.hpp"

namespace mixedh2 {

double LaurentPolynomial::operator()(double omega) const {
  double v = coeffs.size() ? coeffs[0] : 0.0;
  for (Eigen::Index k = 1; k < coeffs.size(); ++k) v += 2.0 * coeffs[k] * std::cos(static_cast<double>(k) * omega);
  return v;
}

Vector LaurentPolynomial::sample(const FrequencyGrid& grid) const {
  Vector v(static_cast<Eigen::Index>(grid.size()));
  for (std::size_t k = 0; k < grid.size(); ++k) v[static_cast<Eigen::Index>(k)] = (*this)(grid.omega(k));
  return v;
}

Complex CausalPolynomial::operator()(double omega) const {
  // Horner in z^-1.
  const Complex zi = std::polar(1.0, -omega);
  Complex v = 0.0;
  for (Eigen::Index k = coeffs.size() - 1; k >= 0; --k) v = v * zi + coeffs[k];
  return v;
}

std::vector<Complex> CausalPolynomial::sample(const FrequencyGrid& grid) const {
  std::vector<Complex> v(grid.size());
  for (std::size_t k = 0; k < grid.size(); ++k) v[k] = (*this)(grid.omega(k));
  return v;
}

CVector CausalPolynomial::roots() const {
  const int m = order();
  if (m <= 0) return CVector();
  Matrix Cm = Matrix::Zero(m, m);
  for (int i = 0; i < m; ++i) Cm(0, i) = -coeffs[i + 1] / coeffs[0];
  for (int i = 1; i < m; ++i) Cm(i, i - 1) = 1.0;
  Eigen::EigenSolver<Matrix> es(Cm, false);
  return es.eigenvalues();
}

LaurentPolynomial squared_magnitude(const CausalPolynomial& L) {
  const int m = L.order();
  LaurentPolynomial p{Vector::Zero(std::max(m, 0) + 1)};
  for (int k = 0; k <= m; ++k)
    for (int i = 0; i + k <= m; ++i) p.coeffs[k] += L.coeffs[i] * L.coeffs[i + k];
  return p;
}

std::vector<Complex> cepstral_factor(const Vector& N) {
  const std::size_t n = static_cast<std::size_t>(N.size());
  if (n < 2 || (n & (n - 1)) != 0) throw Error(ErrorCode::kInvalidArgument, "sample count must be a power of two");
  const double hi = N.maxCoeff();
  const double lo = N.minCoeff();
  if (!std::isfinite(hi) || !std::isfinite(lo) || hi <= 0.0 || lo < -1e-12 * hi) {
    std::ostringstream os;
    os << "spectrum minimum " << lo << " is not positive";
    throw Error(ErrorCode::kNonPositiveSpectrum, os.str());
  }
  double lift = 0.0;
  if (lo <= 1e-10 * hi) {
    lift = 1e-10 * hi;
    warn("spectrum touches zero; factoring N + 1e-10 max N");
  }
  detail::cvec logs(n);
  for (std::size_t k = 0; k < n; ++k) logs[k] = std::log(std::max(N[static_cast<Eigen::Index>(k)], 0.0) + lift);
  detail::cvec c = detail::coefficients(logs);
  detail::cvec h(n, 0.0);
  h[0] = 0.5 * c[0].real();
  for (std::size_t t = 1; t < n / 2; ++t) h[t] = c[t];
  h[n / 2] = 0.5 * c[n / 2];
  detail::cvec hs = detail::samples(h);
  std::vector<Complex> L(n);
  for (std::size_t k = 0; k < n; ++k) L[k] = std::exp(hs[k]);
  return L;
}

GridSpectrum spectral_factor_grid(const GridSpectrum& N) {
  if (N.rows != 1 || N.cols != 1) throw Error(ErrorCode::kInvalidArgument, "only scalar spectra can be factored");
  return GridSpectrum::scalar(N.grid, cepstral_factor(N.real_values()), false);
}

namespace {

Complex horner(const Vector& a, Complex z, Complex* deriv) {
  // a holds ascending powers.
  Complex v = 0.0, d = 0.0;
  for (Eigen::Index k = a.size() - 1; k >= 0; --k) {
    d = d * z + v;
    v = v * z + a[k];
  }
  if (deriv) *deriv = d;
  return v;
}

}  // namespace

CausalPolynomial polynomial_factor(const LaurentPolynomial& p) {
  if (p.coeffs.size() == 0 || !p.coeffs.allFinite()) throw Error(ErrorCode::kInvalidArgument, "empty polynomial");
  const int m0 = p.order();
  const int ngrid = std::max(16 * m0, 16);
  double pmax = 0.0;
  for (int k = 0; k < ngrid; ++k) {
    const double v = p(2.0 * std::numbers::pi * k / ngrid);
    if (!(v > 0.0)) throw Error(ErrorCode::kNotPositive, "polynomial is not positive on the verification grid");
    pmax = std::max(pmax, v);
  }
  // Trailing coefficients below roundoff carry no roots worth keeping.
  int m = m0;
  const double cmax = p.coeffs.cwiseAbs().maxCoeff();
  while (m > 0 && std::abs(p.coeffs[m]) <= 1e-14 * cmax) --m;
  if (m == 0) return CausalPolynomial{Vector::Constant(1, std::sqrt(p.coeffs[0]))};

  // z^m p(z) in ascending powers: a_j = c_{|j - m|}.
  Vector a(2 * m + 1);
  for (int j = 0; j <= 2 * m; ++j) a[j] = p.coeffs[std::abs(j - m)];
  Matrix comp = Matrix::Zero(2 * m, 2 * m);
  for (int j = 0; j < 2 * m; ++j) comp(0, j) = -a[2 * m - 1 - j] / a[2 * m];
  for (int j = 1; j < 2 * m; ++j) comp(j, j - 1) = 1.0;
  Eigen::EigenSolver<Matrix> es(comp, false);
  if (es.info() != Eigen::Success) throw Error(ErrorCode::kRootPairingFailure, "companion eigen-solve failed");
  std::vector<Complex> r(es.eigenvalues().data(), es.eigenvalues().data() + 2 * m);
  for (auto& z : r) {
    Complex d;
    Complex v = horner(a, z, &d);
    if (std::abs(d) > 0.0) {
      Complex z1 = z - v / d;
      if (std::isfinite(z1.real()) && std::isfinite(z1.imag()) && std::abs(horner(a, z1, nullptr)) <= std::abs(v))
        z = z1;
    }
  }
  std::stable_sort(r.begin(), r.end(), [](Complex x, Complex y) { return std::abs(x) < std::abs(y); });
  const double tie = 1e-7;
  int strictly_in = 0, strictly_out = 0, boundary = 0;
  for (const auto& z : r) {
    const double d = std::abs(z) - 1.0;
    if (d < -tie) ++strictly_in;
    else if (d > tie) ++strictly_out;
    else ++boundary;
  }
  if (strictly_in > m || strictly_out > m) {
    std::ostringstream os;
    os << "roots split " << strictly_in << " inside / " << strictly_out << " outside for order " << m;
    throw Error(ErrorCode::kRootPairingFailure, os.str());
  }
  if (boundary > 0) warn("polynomial_factor: roots within 1e-7 of the unit circle assigned inside");

  // Monic factor prod (1 - r_i z^-1).
  CVector l = CVector::Zero(m + 1);
  l[0] = 1.0;
  for (int i = 0; i < m; ++i) {
    for (int k = i + 1; k >= 1; --k) l[k] -= r[static_cast<std::size_t>(i)] * l[k - 1];
  }
  Vector lr = l.real();
  const double scale = std::sqrt(p.coeffs[0] / lr.squaredNorm());
  CausalPolynomial L{lr * scale};

  double err = 0.0;
  const LaurentPolynomial back = squared_magnitude(L);
  for (int k = 0; k < ngrid; ++k) {
    const double w = 2.0 * std::numbers::pi * k / ngrid;
    err = std::max(err, std::abs(back(w) - p(w)));
  }
  if (err > 1e-8 * pmax) {
    std::ostringstream os;
    os << "polynomial_factor: reconstruction error " << err / pmax << " relative";
    warn(os.str());
  }
  return L;
}

}  // namespace mixedh2
