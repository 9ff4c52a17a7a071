#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace mixedh2 {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using Complex = std::complex<double>;

/// Discrete-time plant x+ = A x + Bu u + Bw w with unit state and input
/// weights. Use make_system() to fold general weights in.
struct StateSpaceSystem {
  std::string name;
  Matrix A;
  Matrix Bu;
  Matrix Bw;

  int dx() const { return static_cast<int>(A.rows()); }
  int du() const { return static_cast<int>(Bu.cols()); }
  int dw() const { return static_cast<int>(Bw.cols()); }

  // Throws InvalidArgument on inconsistent shapes, non-finite entries or
  // dw != 1.
  void validate() const;
};

/// Builds a normalized plant. Q and R (symmetric positive definite) are
/// absorbed by x -> Q^{1/2} x, u -> R^{1/2} u.
StateSpaceSystem make_system(std::string name, const Matrix& A, const Matrix& Bu, const Matrix& Bw,
                             const std::optional<Matrix>& Q = std::nullopt,
                             const std::optional<Matrix>& R = std::nullopt);

class FrequencyGrid {
 public:
  explicit FrequencyGrid(std::size_t n = 1024);

  // Also enforces n >= 4 * dx.
  static FrequencyGrid for_system(std::size_t n, int dx);

  std::size_t size() const { return n_; }
  double omega(std::size_t k) const;
  Complex z(std::size_t k) const;

  // Index of the sample at 2 pi - omega_k.
  std::size_t mirror(std::size_t k) const { return k == 0 ? 0 : n_ - k; }

  bool operator==(const FrequencyGrid& o) const { return n_ == o.n_; }
  bool operator!=(const FrequencyGrid& o) const { return n_ != o.n_; }

 private:
  std::size_t n_;
};

/// Samples of a matrix-valued function on a FrequencyGrid.
struct GridSpectrum {
  FrequencyGrid grid;
  int rows = 0;
  int cols = 0;
  bool hermitian = false;
  std::vector<CMatrix> values;

  GridSpectrum() = default;
  GridSpectrum(const FrequencyGrid& g, int r, int c, bool herm = false);

  static GridSpectrum scalar(const FrequencyGrid& g, const std::vector<Complex>& v, bool herm = false);
  static GridSpectrum scalar(const FrequencyGrid& g, const Vector& v);

  std::size_t size() const { return values.size(); }
  const CMatrix& operator[](std::size_t k) const { return values[k]; }
  CMatrix& operator[](std::size_t k) { return values[k]; }

  // (0,0) entry at every grid point.
  std::vector<Complex> scalar_values() const;
  // Real part of the (0,0) entry.
  Vector real_values() const;

  // Largest deviation from value(2 pi - w) = conj(value(w)).
  double conjugate_symmetry_error() const;
  // For hermitian spectra: largest |Im| on the diagonal.
  double hermitian_error() const;
  // Smallest eigenvalue over the grid of the Hermitian part.
  double min_eigenvalue() const;
};

struct PlantResponse {
  GridSpectrum F;
  GridSpectrum G;
};

// F_k = (z_k I - A)^{-1} Bu, G_k = (z_k I - A)^{-1} Bw.
PlantResponse eval_plant(const StateSpaceSystem& sys, const FrequencyGrid& grid);

// Stacked [F K + G; K].
GridSpectrum closed_loop(const GridSpectrum& F, const GridSpectrum& G, const GridSpectrum& K);

double h2_norm(const GridSpectrum& T);

// Grid maximum of the largest singular value.
double hinf_norm(const GridSpectrum& T);

using ResponseFn = std::function<CMatrix(double)>;

// Grid maximum followed by one golden-section pass on the bracketing interval
// using the exact response.
double hinf_norm(const GridSpectrum& T, const ResponseFn& exact);

double max_singular_value(const CMatrix& M);

// Pointwise largest singular value squared (the spectral norm of T*T).
Vector sigma_max_squared(const GridSpectrum& T);

/// Real state-space realization y = C (zI - A)^{-1} B u + D u.
struct StateSpaceController {
  Matrix A;
  Matrix B;
  Matrix C;
  Matrix D;

  int order() const { return static_cast<int>(A.rows()); }
  CMatrix response(double omega) const;
  GridSpectrum sample(const FrequencyGrid& grid) const;
  // Markov parameters D, CB, CAB, ... up to lag n-1.
  std::vector<Matrix> impulse(int n) const;
};

// Exact closed-loop response of the plant under a realized controller.
ResponseFn closed_loop_response(const StateSpaceSystem& sys, const StateSpaceController& K);

}  // namespace mixedh2
