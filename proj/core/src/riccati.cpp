#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "mixedh2/errors.hpp"
#include "mixedh2/synthesis.hpp"

namespace mixedh2 {

double spectral_radius(const Matrix& M) {
  if (M.size() == 0) return 0.0;
  Eigen::EigenSolver<Matrix> es(M, false);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

Matrix solve_stein(const Matrix& M, const Matrix& N, const Matrix& C) {
  const Eigen::Index r = C.rows(), c = C.cols();
  // vec(M X N) = (N^T kron M) vec(X)
  Matrix K = Matrix::Identity(r * c, r * c);
  for (Eigen::Index i = 0; i < c; ++i)
    for (Eigen::Index j = 0; j < c; ++j) K.block(i * r, j * r, r, r) -= N(j, i) * M;
  Eigen::FullPivLU<Matrix> lu(K);
  if (!lu.isInvertible()) throw Error(ErrorCode::kIllConditioned, "Stein equation is singular");
  Vector x = lu.solve(Eigen::Map<const Vector>(C.data(), r * c));
  return Eigen::Map<Matrix>(x.data(), r, c);
}

namespace {

Matrix dare_map(const Matrix& A, const Matrix& B, const Matrix& P) {
  const Matrix Ru = Matrix::Identity(B.cols(), B.cols()) + B.transpose() * P * B;
  return Matrix::Identity(A.rows(), A.rows()) + A.transpose() * P * A -
         A.transpose() * P * B * Ru.ldlt().solve(B.transpose() * P * A);
}

}  // namespace

RiccatiData solve_lqr_riccati(const StateSpaceSystem& sys) {
  sys.validate();
  const Matrix& A = sys.A;
  const Matrix& B = sys.Bu;
  const Eigen::Index n = A.rows();
  const Matrix I = Matrix::Identity(n, n);

  // Structured doubling: H_k -> P quadratically.
  Matrix Ak = A, Gk = B * B.transpose(), Hk = I;
  bool converged = false;
  for (int it = 0; it < 100; ++it) {
    Eigen::PartialPivLU<Matrix> W(I + Gk * Hk);
    const Matrix WA = W.solve(Ak);
    const Matrix WG = W.solve(Gk);
    const Matrix Hn = Hk + Ak.transpose() * Hk * WA;
    Gk = Gk + Ak * WG * Ak.transpose();
    Ak = Ak * WA;
    Gk = 0.5 * (Gk + Gk.transpose()).eval();
    const double change = (Hn - Hk).norm();
    Hk = 0.5 * (Hn + Hn.transpose());
    if (!Hk.allFinite()) break;
    if (change <= 1e-14 * std::max(1.0, Hk.norm())) {
      converged = true;
      break;
    }
  }
  if (!converged) throw Error(ErrorCode::kNotStabilizable, "doubling iteration did not converge");

  // Newton (Hewer) polish through Stein solves.
  Matrix P = Hk;
  for (int it = 0; it < 3; ++it) {
    const Matrix Ru = Matrix::Identity(B.cols(), B.cols()) + B.transpose() * P * B;
    const Matrix K = Ru.ldlt().solve(B.transpose() * P * A);
    const Matrix AK = A - B * K;
    if (spectral_radius(AK) >= 1.0) break;
    Matrix Pn = solve_stein(AK.transpose(), AK, I + K.transpose() * K);
    Pn = 0.5 * (Pn + Pn.transpose());
    const double before = (dare_map(A, B, P) - P).norm();
    const double after = (dare_map(A, B, Pn) - Pn).norm();
    if (!(after <= before)) break;
    P = Pn;
    if (after <= 1e-15 * std::max(1.0, P.norm())) break;
  }

  RiccatiData r;
  r.P = P;
  r.R_u = Matrix::Identity(B.cols(), B.cols()) + B.transpose() * P * B;
  r.K_lqr = r.R_u.ldlt().solve(B.transpose() * P * A);
  r.A_K = A - B * r.K_lqr;
  const double rho = spectral_radius(r.A_K);
  if (!(rho < 1.0)) {
    std::ostringstream os;
    os << "closed-loop spectral radius " << rho << " >= 1";
    throw Error(ErrorCode::kNotStabilizable, os.str());
  }
  Eigen::LLT<Matrix> llt(r.R_u);
  r.U = llt.matrixU();
  r.A_bar = r.A_K.transpose();
  r.C_bar = -r.U.transpose().triangularView<Eigen::Lower>().solve(B.transpose());
  r.D_bar = r.A_K.transpose() * P * sys.Bw;
  r.residual = (dare_map(A, B, P) - P).norm() / std::max(1.0, P.norm());
  if (!(r.residual <= 1e-10)) {
    std::ostringstream os;
    os << "DARE residual " << r.residual << " too large";
    throw Error(ErrorCode::kNotStabilizable, os.str());
  }
  return r;
}

}  // namespace mixedh2
