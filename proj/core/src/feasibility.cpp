#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "mixedh2/errors.hpp"
#include "mixedh2/rational_approx.hpp"
#include "lp.hpp"

namespace mixedh2 {

LaurentPolynomial gram_to_laurent(const Matrix& G) {
  const Eigen::Index n = G.rows();
  LaurentPolynomial p{Vector::Zero(n)};
  for (Eigen::Index k = 0; k < n; ++k) p.coeffs[k] = G.diagonal(k).sum();
  return p;
}

LaurentPolynomial GramPair::p() const { return gram_to_laurent(P); }
LaurentPolynomial GramPair::q() const { return gram_to_laurent(Q); }

std::vector<std::size_t> constraint_samples(const FrequencyGrid& grid, int m) {
  std::size_t want = static_cast<std::size_t>(std::max(16 * (m + 1), 128));
  std::size_t s = 1;
  while (s < want) s <<= 1;
  s = std::min(s, grid.size());
  const std::size_t stride = grid.size() / s;
  std::vector<std::size_t> idx(s);
  for (std::size_t i = 0; i < s; ++i) idx[i] = i * stride;
  return idx;
}

namespace {

const char* kRowNames[3] = {"upper", "lower", "q_margin"};

// Laurent coefficients -> Gram matrix l l^T of the canonical factor.
Matrix factor_gram(const Vector& coeffs, int m) {
  const CausalPolynomial f = polynomial_factor(LaurentPolynomial{coeffs});
  Vector l = Vector::Zero(m + 1);
  l.head(f.coeffs.size()) = f.coeffs;
  return l * l.transpose();
}

}  // namespace

std::variant<GramPair, Infeasible> feasibility_check(const Vector& omegas, const Vector& Nvals, int m, double eps,
                                                     const FeasibilityOptions& opt) {
  if (m < 0) throw Error(ErrorCode::kInvalidArgument, "order must be non-negative");
  if (omegas.size() != Nvals.size() || omegas.size() == 0)
    throw Error(ErrorCode::kInvalidArgument, "sample and value counts differ");
  if (!(eps >= 0.0)) throw Error(ErrorCode::kInvalidArgument, "eps must be non-negative");
  if (!(Nvals.minCoeff() > 0.0)) throw Error(ErrorCode::kNonPositiveSpectrum, "N must be positive");
  const double scale = Nvals.maxCoeff();
  const Vector n = Nvals / scale;
  const double e = eps / scale;
  const double dq = opt.delta_q;
  const double p_floor = 1e-6 * n.minCoeff();

  // x = (p_0..p_m, q_1..q_m, s), q_0 = 1.
  const Eigen::Index S = n.size(), nv = 2 * m + 2, is = nv - 1;
  const Eigen::Index D = 8 * S + 1;
  Matrix G = Matrix::Zero(3 * S + 2 * D + 1, nv);
  Vector h = Vector::Zero(G.rows());
  auto basis = [](double w, Eigen::Index k) { return k == 0 ? 1.0 : 2.0 * std::cos(static_cast<double>(k) * w); };

  for (Eigen::Index i = 0; i < S; ++i) {
    const double up = n[i] + e, lo = n[i] - e;
    for (Eigen::Index k = 0; k <= m; ++k) {
      const double b = basis(omegas[i], k);
      G(3 * i, k) = b;
      G(3 * i + 1, k) = -b;
      if (k > 0) {
        G(3 * i, m + k) = -up * b;
        G(3 * i + 1, m + k) = lo * b;
        G(3 * i + 2, m + k) = -b;
      }
    }
    G.block(3 * i, is, 3, 1).setOnes();
    h.segment(3 * i, 3) << up, -lo, 1.0 - dq;
  }
  for (Eigen::Index j = 0; j < D; ++j) {
    const double w = std::numbers::pi * static_cast<double>(j) / static_cast<double>(D - 1);
    const Eigen::Index r = 3 * S + 2 * j;
    for (Eigen::Index k = 0; k <= m; ++k) {
      const double b = basis(w, k);
      G(r, k) = -b;
      if (k > 0) G(r + 1, m + k) = -b;
    }
    h[r] = -p_floor;
    h[r + 1] = 1.0 - 0.5 * dq;
  }
  G(G.rows() - 1, is) = 1.0;
  h[G.rows() - 1] = 1.0;

  Vector c = Vector::Zero(nv);
  c[is] = 1.0;
  Vector x0 = Vector::Zero(nv);
  x0[0] = n.mean();
  x0[is] = -2.0 * (1.0 + e);
  const detail::LpResult lp = detail::lp_maximize(c, G, h, x0, opt.max_iter);
  if (!lp.converged) {
    std::ostringstream os;
    os << "interior-point iteration did not converge for eps = " << eps;
    throw Error(ErrorCode::kSolverStall, os.str());
  }

  const double s = lp.x[is];
  if (s < -opt.slack) {
    Eigen::Index imax = 0;
    lp.z.head(3 * S).maxCoeff(&imax);
    return Infeasible{-s * scale, omegas[imax / 3], kRowNames[imax % 3]};
  }

  Vector pc = lp.x.head(m + 1) * scale;
  Vector qc(m + 1);
  qc << 1.0, lp.x.segment(m + 1, m);
  try {
    return GramPair{factor_gram(pc, m), factor_gram(qc, m)};
  } catch (const Error& err) {
    std::ostringstream os;
    os << "feasible point could not be factored for eps = " << eps << " (" << err.what() << ")";
    throw Error(ErrorCode::kSolverStall, os.str());
  }
}

std::variant<GramPair, Infeasible> feasibility_check(const GridSpectrum& N, int m, double eps,
                                                     const FeasibilityOptions& opt) {
  const auto idx = constraint_samples(N.grid, m);
  Vector w(static_cast<Eigen::Index>(idx.size())), v(static_cast<Eigen::Index>(idx.size()));
  for (std::size_t i = 0; i < idx.size(); ++i) {
    w[static_cast<Eigen::Index>(i)] = N.grid.omega(idx[i]);
    v[static_cast<Eigen::Index>(i)] = N.values[idx[i]](0, 0).real();
  }
  return feasibility_check(w, v, m, eps, opt);
}

}  // namespace mixedh2
