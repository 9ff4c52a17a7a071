#include "mixedh2/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "fft.hpp"
#include "mixedh2/errors.hpp"
#include "mixedh2/synthesis.hpp"

namespace mixedh2::oracle {

bool ToeplitzTruncation::causal() const {
  for (int t = -horizon; t < 0; ++t)
    if (at(t).cwiseAbs().maxCoeff() > 0.0) return false;
  return true;
}

ToeplitzTruncation ToeplitzTruncation::zeros(int horizon, int rows, int cols) {
  ToeplitzTruncation T;
  T.horizon = horizon;
  T.blocks.assign(static_cast<std::size_t>(2 * horizon + 1), Matrix::Zero(rows, cols));
  return T;
}

ToeplitzTruncation ToeplitzTruncation::from_impulse(const std::vector<Matrix>& h, int horizon) {
  if (h.empty()) throw Error(ErrorCode::kInvalidArgument, "empty impulse response");
  auto T = zeros(horizon, static_cast<int>(h[0].rows()), static_cast<int>(h[0].cols()));
  for (int t = 0; t <= horizon && t < static_cast<int>(h.size()); ++t) T.at(t) = h[static_cast<std::size_t>(t)];
  return T;
}

ToeplitzTruncation ToeplitzTruncation::from_spectrum(const GridSpectrum& s, int horizon) {
  const int N = static_cast<int>(s.size());
  if (horizon < 0 || 2 * horizon >= N) throw Error(ErrorCode::kInvalidArgument, "horizon must be below N / 2");
  auto T = zeros(horizon, s.rows, s.cols);
  detail::cvec x(static_cast<std::size_t>(N));
  for (int i = 0; i < s.rows; ++i)
    for (int j = 0; j < s.cols; ++j) {
      for (int k = 0; k < N; ++k) x[static_cast<std::size_t>(k)] = s.values[static_cast<std::size_t>(k)](i, j);
      const detail::cvec c = detail::coefficients(x);
      for (int t = -horizon; t <= horizon; ++t) T.at(t)(i, j) = c[static_cast<std::size_t>((t + N) % N)].real();
    }
  return T;
}

namespace {

// Reorders a complex Schur form so that eigenvalues with first(λ) true lead.
void reorder_schur(CMatrix& T, CMatrix& U, bool (*first)(Complex)) {
  const Eigen::Index n = T.rows();
  for (bool swapped = true; swapped;) {
    swapped = false;
    for (Eigen::Index k = 0; k + 1 < n; ++k) {
      if (first(T(k, k)) || !first(T(k + 1, k + 1))) continue;
      const Complex a = T(k, k), b = T(k + 1, k + 1), t = T(k, k + 1);
      const double r = std::hypot(std::abs(t), std::abs(b - a));
      const Complex c = t / r, s = (b - a) / r;
      Eigen::Matrix2cd Q;
      Q << c, -std::conj(s), s, std::conj(c);
      T.middleRows(k, 2) = Q.adjoint() * T.middleRows(k, 2);
      T.middleCols(k, 2) = T.middleCols(k, 2) * Q;
      U.middleCols(k, 2) = U.middleCols(k, 2) * Q;
      T(k + 1, k) = 0.0;
      swapped = true;
    }
  }
}

bool stable_mode(Complex l) { return std::abs(l) < 1.0; }
bool unstable_mode(Complex l) { return std::abs(l) >= 1.0; }

}  // namespace

ToeplitzTruncation closed_loop_impulse(const StateSpaceSystem& sys, const StateSpaceController& K, int horizon) {
  // Stack plant and controller: w drives the controller, u drives the plant.
  const int n = sys.dx(), nk = K.order(), du = sys.du();
  Matrix A = Matrix::Zero(n + nk, n + nk);
  A.topLeftCorner(n, n) = sys.A;
  if (nk > 0) {
    A.topRightCorner(n, nk) = sys.Bu * K.C;
    A.bottomRightCorner(nk, nk) = K.A;
  }
  Matrix B(n + nk, 1);
  B.topRows(n) = sys.Bw + sys.Bu * K.D;
  if (nk > 0) B.bottomRows(nk) = K.B;
  Matrix C = Matrix::Zero(n + du, n + nk);
  C.topLeftCorner(n, n) = Matrix::Identity(n, n);
  if (nk > 0) C.bottomRightCorner(du, nk) = K.C;
  Matrix D = Matrix::Zero(n + du, 1);
  D.bottomRows(du) = K.D;

  // An unstable plant leaves unstable modes that cancel between plant and
  // controller; in floating point they grow, so they are projected out first.
  Eigen::ComplexSchur<CMatrix> schur(A.cast<Complex>());
  const CMatrix T0 = schur.matrixT(), U0 = schur.matrixU();
  const Eigen::Index dim = A.rows();
  Eigen::Index ns = 0;
  for (Eigen::Index k = 0; k < dim; ++k) ns += stable_mode(T0(k, k)) ? 1 : 0;
  CMatrix Ar, Br, Cr;
  if (ns == dim) {
    Ar = A.cast<Complex>();
    Br = B.cast<Complex>();
    Cr = C.cast<Complex>();
  } else {
    const double tol = 1e-7;
    CMatrix T = T0, U = U0;
    reorder_schur(T, U, stable_mode);
    CMatrix Bt = U.adjoint() * B, Ct = C * U;
    const double hidden_in = Bt.bottomRows(dim - ns).norm() / std::max(B.norm(), 1e-300);
    if (hidden_in <= tol) {
      Ar = T.topLeftCorner(ns, ns);
      Br = Bt.topRows(ns);
      Cr = Ct.leftCols(ns);
    } else {
      T = T0;
      U = U0;
      reorder_schur(T, U, unstable_mode);
      Bt = U.adjoint() * B;
      Ct = C * U;
      const double hidden_out = Ct.leftCols(dim - ns).norm() / std::max(C.norm(), 1e-300);
      if (hidden_out > tol) {
        std::ostringstream os;
        os << "closed loop has an unstable mode reaching the output (input coupling " << hidden_in
           << ", output coupling " << hidden_out << ")";
        throw Error(ErrorCode::kIllConditioned, os.str());
      }
      Ar = T.bottomRightCorner(ns, ns);
      Br = Bt.bottomRows(ns);
      Cr = Ct.rightCols(ns);
    }
  }

  std::vector<Matrix> h;
  h.reserve(static_cast<std::size_t>(horizon + 1));
  h.push_back(D);
  CMatrix x = Br;
  for (int t = 1; t <= horizon; ++t) {
    h.push_back((Cr * x).real());
    x = Ar * x;
  }
  return ToeplitzTruncation::from_impulse(h, horizon);
}

namespace {

void check_tail(const ToeplitzTruncation& T) {
  double ref = 0.0;
  for (const auto& b : T.blocks) ref = std::max(ref, b.norm());
  const double tail = std::max(T.at(T.horizon).norm(), T.at(-T.horizon).norm());
  if (tail > 1e-8 * ref) {
    std::ostringstream os;
    os << "tail block norm " << tail << " exceeds 1e-8 of " << ref;
    throw Error(ErrorCode::kTailTooFat, os.str());
  }
}

}  // namespace

double markov_h2(const ToeplitzTruncation& T) {
  check_tail(T);
  double acc = 0.0;
  for (const auto& b : T.blocks) acc += b.squaredNorm();
  return std::sqrt(acc);
}

double toeplitz_hinf(const ToeplitzTruncation& T) {
  check_tail(T);
  const int H = T.horizon, r = T.rows(), c = T.cols();
  const int nb = 2 * H + 1;
  const bool causal = T.causal();
  const int lo = causal ? 0 : -H;
  // y_i = sum_j block_{i-j} x_j, i, j = 0..nb-1.
  auto apply = [&](const Vector& x) {
    Vector y = Vector::Zero(static_cast<Eigen::Index>(nb) * r);
    for (int i = 0; i < nb; ++i)
      for (int t = lo; t <= H; ++t) {
        const int j = i - t;
        if (j < 0 || j >= nb) continue;
        y.segment(static_cast<Eigen::Index>(i) * r, r).noalias() += T.at(t) * x.segment(static_cast<Eigen::Index>(j) * c, c);
      }
    return y;
  };
  auto apply_t = [&](const Vector& y) {
    Vector x = Vector::Zero(static_cast<Eigen::Index>(nb) * c);
    for (int i = 0; i < nb; ++i)
      for (int t = lo; t <= H; ++t) {
        const int j = i - t;
        if (j < 0 || j >= nb) continue;
        x.segment(static_cast<Eigen::Index>(j) * c, c).noalias() +=
            T.at(t).transpose() * y.segment(static_cast<Eigen::Index>(i) * r, r);
      }
    return x;
  };

  // Lanczos on M^T M with full reorthogonalization.
  const Eigen::Index n = static_cast<Eigen::Index>(nb) * c;
  const int kmax = static_cast<int>(std::min<Eigen::Index>(n, 300));
  Matrix V(n, kmax + 1);
  Vector alpha(kmax), beta(kmax);
  Vector v = Vector::Ones(n);
  for (Eigen::Index i = 0; i < n; ++i) v[i] += 0.1 * std::sin(static_cast<double>(i + 1));
  V.col(0) = v.normalized();
  double prev = 0.0, est = 0.0;
  for (int k = 0; k < kmax; ++k) {
    Vector w = apply_t(apply(V.col(k)));
    alpha[k] = V.col(k).dot(w);
    for (int pass = 0; pass < 2; ++pass) w -= V.leftCols(k + 1) * (V.leftCols(k + 1).transpose() * w);
    beta[k] = w.norm();
    Matrix Tk = Matrix::Zero(k + 1, k + 1);
    for (int i = 0; i <= k; ++i) {
      Tk(i, i) = alpha[i];
      if (i < k) Tk(i, i + 1) = Tk(i + 1, i) = beta[i];
    }
    est = Eigen::SelfAdjointEigenSolver<Matrix>(Tk, Eigen::EigenvaluesOnly).eigenvalues().maxCoeff();
    if (beta[k] <= 1e-14 * std::max(1.0, est) || (k > 5 && std::abs(est - prev) <= 1e-13 * est)) break;
    prev = est;
    V.col(k + 1) = w / beta[k];
  }
  return std::sqrt(std::max(est, 0.0));
}

CausalSplit fft_causal_split(const GridSpectrum& s) {
  const std::size_t N = s.size();
  CausalSplit out{GridSpectrum(s.grid, s.rows, s.cols), GridSpectrum(s.grid, s.rows, s.cols)};
  detail::cvec x(N);
  for (int i = 0; i < s.rows; ++i)
    for (int j = 0; j < s.cols; ++j) {
      for (std::size_t k = 0; k < N; ++k) x[k] = s.values[k](i, j);
      const detail::cvec c = detail::coefficients(x);
      detail::cvec cp(N, 0.0), cm(N, 0.0);
      for (std::size_t t = 0; t < N; ++t) {
        if (t < N / 2) cp[t] = c[t];
        else if (t > N / 2) cm[t] = c[t];
        else cp[t] = cm[t] = 0.5 * c[t];
      }
      const detail::cvec xp = detail::samples(cp), xm = detail::samples(cm);
      for (std::size_t k = 0; k < N; ++k) {
        out.causal.values[k](i, j) = xp[k];
        out.anticausal.values[k](i, j) = xm[k];
      }
    }
  return out;
}

namespace {

struct WeightedProblem {
  Matrix M;     // stacked responses per unit of each FIR coefficient
  Vector g;     // open-loop response
  Vector r;     // weight lags 0..R
  int rows = 0; // dx + du
  int len = 0;  // response length
};

// Applies the symmetric block Toeplitz weight to stacked responses.
Matrix weight_apply(const WeightedProblem& p, const Matrix& X) {
  Matrix Y = Matrix::Zero(X.rows(), X.cols());
  const int R = static_cast<int>(p.r.size()) - 1;
  for (int s = 0; s < p.len; ++s)
    for (int d = -R; d <= R; ++d) {
      const int t = s - d;
      if (t < 0 || t >= p.len) continue;
      Y.middleRows(static_cast<Eigen::Index>(s) * p.rows, p.rows) +=
          p.r[std::abs(d)] * X.middleRows(static_cast<Eigen::Index>(t) * p.rows, p.rows);
    }
  return Y;
}

WeightedProblem build_problem(const StateSpaceSystem& sys, const GridSpectrum& Nspec, int horizon) {
  sys.validate();
  if (horizon < 1 || horizon > 64) throw Error(ErrorCode::kInvalidArgument, "horizon must be in [1, 64]");
  if (Nspec.rows != 1 || Nspec.cols != 1) throw Error(ErrorCode::kInvalidArgument, "weight must be scalar");
  if (!(spectral_radius(sys.A) < 1.0))
    throw Error(ErrorCode::kInvalidArgument, "weighted oracle requires a Schur-stable A");
  const int n = sys.dx(), du = sys.du();
  int decay = 1;
  {
    Matrix Ap = sys.A;
    while (decay < 4000 && Ap.norm() > 1e-14) {
      Ap = Ap * sys.A;
      ++decay;
    }
  }
  WeightedProblem p;
  p.rows = n + du;
  p.len = horizon + decay + 1;

  std::vector<Matrix> Fm(static_cast<std::size_t>(p.len)), Gm(static_cast<std::size_t>(p.len));
  Fm[0] = Matrix::Zero(n, du);
  Gm[0] = Matrix::Zero(n, 1);
  Matrix X = sys.Bu, Y = sys.Bw;
  for (int t = 1; t < p.len; ++t) {
    Fm[static_cast<std::size_t>(t)] = X;
    Gm[static_cast<std::size_t>(t)] = Y;
    X = sys.A * X;
    Y = sys.A * Y;
  }
  const Eigen::Index rowsTot = static_cast<Eigen::Index>(p.len) * p.rows;
  p.M = Matrix::Zero(rowsTot, static_cast<Eigen::Index>(horizon) * du);
  p.g = Vector::Zero(rowsTot);
  for (int t = 0; t < p.len; ++t) p.g.segment(static_cast<Eigen::Index>(t) * p.rows, n) = Gm[static_cast<std::size_t>(t)];
  for (int j = 0; j < horizon; ++j)
    for (int a = 0; a < du; ++a) {
      const Eigen::Index col = static_cast<Eigen::Index>(j) * du + a;
      p.M(static_cast<Eigen::Index>(j) * p.rows + n + a, col) = 1.0;
      for (int t = j + 1; t < p.len; ++t)
        p.M.block(static_cast<Eigen::Index>(t) * p.rows, col, n, 1) = Fm[static_cast<std::size_t>(t - j)].col(a);
    }

  const std::size_t NN = Nspec.size();
  detail::cvec x(NN);
  for (std::size_t k = 0; k < NN; ++k) x[k] = Nspec.values[k](0, 0);
  const detail::cvec c = detail::coefficients(x);
  int R = std::min(p.len - 1, static_cast<int>(NN / 2) - 1);
  const double r0 = std::abs(c[0].real());
  while (R > 0 && std::abs(c[static_cast<std::size_t>(R)].real()) <= 1e-15 * r0) --R;
  p.r.resize(R + 1);
  for (int k = 0; k <= R; ++k) p.r[k] = c[static_cast<std::size_t>(k)].real();
  return p;
}

}  // namespace

WeightedH2 finite_horizon_weighted_h2(const StateSpaceSystem& sys, const GridSpectrum& Nspec, int horizon) {
  const WeightedProblem p = build_problem(sys, Nspec, horizon);
  const Matrix WM = weight_apply(p, p.M);
  const Vector Wg = weight_apply(p, p.g).col(0);
  Matrix H = p.M.transpose() * WM;
  H = 0.5 * (H + H.transpose()).eval();
  const Vector b = p.M.transpose() * Wg;
  const double c = p.g.dot(Wg.col(0));
  Eigen::SelfAdjointEigenSolver<Matrix> es(H, Eigen::EigenvaluesOnly);
  const double emin = es.eigenvalues().minCoeff(), emax = es.eigenvalues().maxCoeff();
  if (!(emin > 0.0) || emax / emin > 1e12) {
    std::ostringstream os;
    os << "normal equations have condition " << (emin > 0.0 ? emax / emin : INFINITY);
    throw Error(ErrorCode::kIllConditioned, os.str());
  }
  const Vector kappa = -H.ldlt().solve(b);
  const int du = sys.du();
  WeightedH2 out;
  out.K_fir = ToeplitzTruncation::zeros(horizon, du, 1);
  for (int t = 0; t < horizon; ++t) out.K_fir.at(t) = kappa.segment(static_cast<Eigen::Index>(t) * du, du);
  out.cost = c + b.dot(kappa);
  return out;
}

double weighted_cost(const StateSpaceSystem& sys, const GridSpectrum& Nspec, const std::vector<Matrix>& k_fir) {
  const int horizon = static_cast<int>(k_fir.size());
  const WeightedProblem p = build_problem(sys, Nspec, horizon);
  const int du = sys.du();
  Vector kappa(static_cast<Eigen::Index>(horizon) * du);
  for (int t = 0; t < horizon; ++t) kappa.segment(static_cast<Eigen::Index>(t) * du, du) = k_fir[static_cast<std::size_t>(t)];
  const Vector h = p.M * kappa + p.g;
  return h.dot(weight_apply(p, h).col(0));
}

}  // namespace mixedh2::oracle
