#include "mixedh2/lti.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <Eigen/Eigenvalues>

#include "mixedh2/errors.hpp"

namespace mixedh2 {

namespace {

bool is_pow2(std::size_t n) { return n >= 1 && (n & (n - 1)) == 0; }

Matrix spd_sqrt(const Matrix& M, const char* what) {
  if (M.rows() != M.cols()) throw Error(ErrorCode::kInvalidArgument, std::string(what) + " must be square");
  if ((M - M.transpose()).norm() > 1e-12 * std::max(1.0, M.norm()))
    throw Error(ErrorCode::kInvalidArgument, std::string(what) + " must be symmetric");
  Eigen::SelfAdjointEigenSolver<Matrix> es(M);
  if (es.eigenvalues().minCoeff() <= 0.0)
    throw Error(ErrorCode::kInvalidArgument, std::string(what) + " must be positive definite");
  return es.operatorSqrt();
}

void check_finite(const Matrix& M, const char* what) {
  if (!M.allFinite()) throw Error(ErrorCode::kInvalidArgument, std::string(what) + " has non-finite entries");
}

}  // namespace

void StateSpaceSystem::validate() const {
  check_finite(A, "A");
  check_finite(Bu, "Bu");
  check_finite(Bw, "Bw");
  if (A.rows() == 0 || A.rows() != A.cols()) throw Error(ErrorCode::kInvalidArgument, "A must be square and non-empty");
  if (Bu.rows() != A.rows() || Bu.cols() == 0)
    throw Error(ErrorCode::kInvalidArgument, "Bu must have dx rows and at least one column");
  if (Bw.rows() != A.rows()) throw Error(ErrorCode::kInvalidArgument, "Bw must have dx rows");
  if (Bw.cols() != 1) throw Error(ErrorCode::kInvalidArgument, "only a scalar disturbance (dw = 1) is supported");
}

StateSpaceSystem make_system(std::string name, const Matrix& A, const Matrix& Bu, const Matrix& Bw,
                             const std::optional<Matrix>& Q, const std::optional<Matrix>& R) {
  StateSpaceSystem sys{std::move(name), A, Bu, Bw};
  sys.validate();
  if (Q) {
    if (Q->rows() != A.rows()) throw Error(ErrorCode::kInvalidArgument, "Q must be dx x dx");
    Matrix Qh = spd_sqrt(*Q, "Q");
    Matrix Qhi = Qh.inverse();
    sys.A = Qh * A * Qhi;
    sys.Bu = Qh * sys.Bu;
    sys.Bw = Qh * sys.Bw;
  }
  if (R) {
    if (R->rows() != Bu.cols()) throw Error(ErrorCode::kInvalidArgument, "R must be du x du");
    sys.Bu = sys.Bu * spd_sqrt(*R, "R").inverse();
  }
  return sys;
}

FrequencyGrid::FrequencyGrid(std::size_t n) : n_(n) {
  if (!is_pow2(n) || n < 4) throw Error(ErrorCode::kInvalidArgument, "grid size must be a power of two >= 4");
}

FrequencyGrid FrequencyGrid::for_system(std::size_t n, int dx) {
  FrequencyGrid g(n);
  if (n < 4 * static_cast<std::size_t>(dx))
    throw Error(ErrorCode::kInvalidArgument, "grid size must be at least 4 * dx");
  return g;
}

double FrequencyGrid::omega(std::size_t k) const {
  return 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n_);
}

Complex FrequencyGrid::z(std::size_t k) const { return std::polar(1.0, omega(k)); }

GridSpectrum::GridSpectrum(const FrequencyGrid& g, int r, int c, bool herm)
    : grid(g), rows(r), cols(c), hermitian(herm), values(g.size(), CMatrix::Zero(r, c)) {}

GridSpectrum GridSpectrum::scalar(const FrequencyGrid& g, const std::vector<Complex>& v, bool herm) {
  if (v.size() != g.size()) throw Error(ErrorCode::kGridMismatch, "sample count does not match grid");
  GridSpectrum s(g, 1, 1, herm);
  for (std::size_t k = 0; k < v.size(); ++k) s.values[k](0, 0) = v[k];
  return s;
}

GridSpectrum GridSpectrum::scalar(const FrequencyGrid& g, const Vector& v) {
  if (static_cast<std::size_t>(v.size()) != g.size())
    throw Error(ErrorCode::kGridMismatch, "sample count does not match grid");
  GridSpectrum s(g, 1, 1, true);
  for (std::size_t k = 0; k < g.size(); ++k) s.values[k](0, 0) = v[static_cast<Eigen::Index>(k)];
  return s;
}

std::vector<Complex> GridSpectrum::scalar_values() const {
  std::vector<Complex> out(values.size());
  for (std::size_t k = 0; k < values.size(); ++k) out[k] = values[k](0, 0);
  return out;
}

Vector GridSpectrum::real_values() const {
  Vector out(static_cast<Eigen::Index>(values.size()));
  for (std::size_t k = 0; k < values.size(); ++k) out[static_cast<Eigen::Index>(k)] = values[k](0, 0).real();
  return out;
}

double GridSpectrum::conjugate_symmetry_error() const {
  double err = 0.0;
  for (std::size_t k = 0; k < values.size(); ++k)
    err = std::max(err, (values[grid.mirror(k)] - values[k].conjugate()).cwiseAbs().maxCoeff());
  return err;
}

double GridSpectrum::hermitian_error() const {
  double err = 0.0;
  for (const auto& v : values)
    for (Eigen::Index i = 0; i < std::min(v.rows(), v.cols()); ++i) err = std::max(err, std::abs(v(i, i).imag()));
  return err;
}

double GridSpectrum::min_eigenvalue() const {
  double lo = std::numeric_limits<double>::infinity();
  for (const auto& v : values) {
    CMatrix H = 0.5 * (v + v.adjoint());
    Eigen::SelfAdjointEigenSolver<CMatrix> es(H, Eigen::EigenvaluesOnly);
    lo = std::min(lo, es.eigenvalues().minCoeff());
  }
  return lo;
}

PlantResponse eval_plant(const StateSpaceSystem& sys, const FrequencyGrid& grid) {
  sys.validate();
  const int n = sys.dx();
  Eigen::ComplexEigenSolver<CMatrix> es(sys.A.cast<Complex>(), false);
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
    if (std::abs(std::abs(es.eigenvalues()[i]) - 1.0) < 1e-10)
      throw Error(ErrorCode::kSingularResolvent, "A has an eigenvalue on the unit circle");
  }
  PlantResponse r{GridSpectrum(grid, n, sys.du()), GridSpectrum(grid, n, sys.dw())};
  CMatrix B(n, sys.du() + sys.dw());
  B << sys.Bu.cast<Complex>(), sys.Bw.cast<Complex>();
  const CMatrix Ac = sys.A.cast<Complex>();
  for (std::size_t k = 0; k < grid.size(); ++k) {
    CMatrix M = grid.z(k) * CMatrix::Identity(n, n) - Ac;
    Eigen::PartialPivLU<CMatrix> lu(M);
    CMatrix X = lu.solve(B);
    if (!X.allFinite()) throw Error(ErrorCode::kSingularResolvent, "resolvent solve failed");
    r.F.values[k] = X.leftCols(sys.du());
    r.G.values[k] = X.rightCols(sys.dw());
  }
  return r;
}

GridSpectrum closed_loop(const GridSpectrum& F, const GridSpectrum& G, const GridSpectrum& K) {
  if (F.grid != G.grid || F.grid != K.grid || F.size() != K.size() || G.size() != K.size())
    throw Error(ErrorCode::kGridMismatch, "closed_loop: grids differ");
  if (F.rows != G.rows || F.cols != K.rows || G.cols != K.cols)
    throw Error(ErrorCode::kGridMismatch, "closed_loop: block dimensions differ");
  GridSpectrum T(F.grid, F.rows + K.rows, K.cols);
  for (std::size_t k = 0; k < F.size(); ++k) {
    T.values[k].topRows(F.rows) = F.values[k] * K.values[k] + G.values[k];
    T.values[k].bottomRows(K.rows) = K.values[k];
  }
  return T;
}

double h2_norm(const GridSpectrum& T) {
  double acc = 0.0;
  for (const auto& v : T.values) acc += v.squaredNorm();
  return std::sqrt(acc / static_cast<double>(T.size()));
}

double max_singular_value(const CMatrix& M) {
  if (M.rows() == 1 || M.cols() == 1) return M.norm();
  Eigen::JacobiSVD<CMatrix> svd(M);
  return svd.singularValues()(0);
}

Vector sigma_max_squared(const GridSpectrum& T) {
  Vector s(static_cast<Eigen::Index>(T.size()));
  for (std::size_t k = 0; k < T.size(); ++k) {
    double v = max_singular_value(T.values[k]);
    s[static_cast<Eigen::Index>(k)] = v * v;
  }
  return s;
}

double hinf_norm(const GridSpectrum& T) {
  double m = 0.0;
  for (const auto& v : T.values) m = std::max(m, max_singular_value(v));
  return m;
}

double hinf_norm(const GridSpectrum& T, const ResponseFn& exact) {
  std::size_t best = 0;
  double m = -1.0;
  for (std::size_t k = 0; k < T.size(); ++k) {
    double v = max_singular_value(T.values[k]);
    if (v > m) {
      m = v;
      best = k;
    }
  }
  if (!exact || T.size() == 0) return m;
  const double h = 2.0 * std::numbers::pi / static_cast<double>(T.size());
  double a = T.grid.omega(best) - h;
  double b = T.grid.omega(best) + h;
  auto f = [&](double w) { return max_singular_value(exact(w)); };
  const double r = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - r * (b - a), d = a + r * (b - a);
  double fc = f(c), fd = f(d);
  for (int it = 0; it < 60 && (b - a) > 1e-12; ++it) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - r * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + r * (b - a);
      fd = f(d);
    }
  }
  return std::max({m, fc, fd});
}

CMatrix StateSpaceController::response(double omega) const {
  const Complex z = std::polar(1.0, omega);
  CMatrix out = D.cast<Complex>();
  if (order() == 0) return out;
  CMatrix M = z * CMatrix::Identity(order(), order()) - A.cast<Complex>();
  out += C.cast<Complex>() * M.partialPivLu().solve(B.cast<Complex>());
  return out;
}

GridSpectrum StateSpaceController::sample(const FrequencyGrid& grid) const {
  GridSpectrum s(grid, static_cast<int>(D.rows()), static_cast<int>(D.cols()));
  for (std::size_t k = 0; k < grid.size(); ++k) s.values[k] = response(grid.omega(k));
  return s;
}

std::vector<Matrix> StateSpaceController::impulse(int n) const {
  std::vector<Matrix> h;
  h.reserve(static_cast<std::size_t>(std::max(n, 0)));
  if (n <= 0) return h;
  h.push_back(D);
  Matrix X = B;
  for (int t = 1; t < n; ++t) {
    h.push_back(order() == 0 ? Matrix::Zero(D.rows(), D.cols()) : Matrix(C * X));
    if (order() > 0) X = A * X;
  }
  return h;
}

ResponseFn closed_loop_response(const StateSpaceSystem& sys, const StateSpaceController& K) {
  return [sys, K](double w) {
    const int n = sys.dx();
    CMatrix M = std::polar(1.0, w) * CMatrix::Identity(n, n) - sys.A.cast<Complex>();
    Eigen::PartialPivLU<CMatrix> lu(M);
    CMatrix Kw = K.response(w);
    CMatrix x = lu.solve(sys.Bu.cast<Complex>() * Kw + sys.Bw.cast<Complex>());
    CMatrix T(n + Kw.rows(), Kw.cols());
    T << x, Kw;
    return T;
  };
}

}  // namespace mixedh2
