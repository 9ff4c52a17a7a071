#include "mixedh2/rational_approx.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <json.hpp>

#include "mixedh2/errors.hpp"
#include "mixedh2/fixed_point.hpp"
#include "mixedh2/log.hpp"

namespace mixedh2 {

namespace {

double achieved(const GramPair& g, const Vector& w, const Vector& n) {
  const LaurentPolynomial p = g.p(), q = g.q();
  double e = 0.0;
  for (Eigen::Index i = 0; i < w.size(); ++i) e = std::max(e, std::abs(p(w[i]) / q(w[i]) - n[i]));
  return e;
}

}  // namespace

RationalSpectrum min_epsilon(const GridSpectrum& N, int m, double lo, double hi, const FeasibilityOptions& opt) {
  if (N.rows != 1 || N.cols != 1) throw Error(ErrorCode::kInvalidArgument, "min_epsilon needs a scalar spectrum");
  if (m < 0) throw Error(ErrorCode::kInvalidArgument, "order must be non-negative");
  const auto idx = constraint_samples(N.grid, m);
  Vector w(static_cast<Eigen::Index>(idx.size())), n(static_cast<Eigen::Index>(idx.size()));
  for (std::size_t i = 0; i < idx.size(); ++i) {
    w[static_cast<Eigen::Index>(i)] = N.grid.omega(idx[i]);
    n[static_cast<Eigen::Index>(i)] = N.values[idx[i]](0, 0).real();
  }
  const double nmax = n.maxCoeff(), nmin = n.minCoeff();
  if (!(nmin > 0.0)) throw Error(ErrorCode::kNonPositiveSpectrum, "N must be positive");

  // The constant midpoint is always admissible.
  GramPair best{Matrix::Identity(m + 1, m + 1) * (0.5 * (nmax + nmin) / (m + 1)),
                Matrix::Identity(m + 1, m + 1) / (m + 1)};
  double best_eps = achieved(best, w, n);
  if (!(hi > 0.0)) hi = nmax - nmin;
  hi = std::min(hi, best_eps);
  lo = std::max(lo, 0.0);
  const double floor = 1e-9 * nmax;

  FeasibilityOptions o = opt;
  while (hi - lo > std::max(1e-3 * hi, floor)) {
    const double mid = 0.5 * (lo + hi);
    bool ok = false;
    try {
      auto r = feasibility_check(w, n, m, mid, o);
      if (auto* g = std::get_if<GramPair>(&r)) {
        const double a = achieved(*g, w, n);
        if (a < best_eps) {
          best = *g;
          best_eps = a;
        }
        ok = true;
      }
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kSolverStall) throw;
      warn(std::string("min_epsilon: ") + e.what() + "; treating as infeasible");
    }
    if (ok)
      hi = std::min(mid, best_eps);
    else
      lo = mid;
  }

  RationalSpectrum rs;
  rs.m = m;
  rs.p = best.p();
  rs.q = best.q();
  const double mean = rs.q.coeffs[0];
  rs.p.coeffs /= mean;
  rs.q.coeffs /= mean;
  rs.achieved_eps = best_eps;
  return rs;
}

ApproxController approx_controller(const SynthesisContext& ctx, const RationalSpectrum& rspec) {
  CausalPolynomial lp, lq;
  try {
    lp = polynomial_factor(rspec.p);
    lq = polynomial_factor(rspec.q);
  } catch (const Error& e) {
    throw Error(ErrorCode::kFactorizationFailure, e.what());
  }
  const int m = std::max(lp.order(), lq.order());
  Vector a = Vector::Zero(m + 1), bq = Vector::Zero(m + 1);
  a.head(lp.coeffs.size()) = lp.coeffs / lq.coeffs[0];
  bq.head(lq.coeffs.size()) = lq.coeffs / lq.coeffs[0];

  ApproxController out;
  out.num = CausalPolynomial{a};
  out.den = CausalPolynomial{bq};

  // Controllable companion form of L~ = num / den.
  const double d = a[0];
  Matrix AL = Matrix::Zero(m, m), BL = Matrix::Zero(m, 1), CL(1, m);
  for (int k = 0; k < m; ++k) {
    AL(0, k) = -bq[k + 1];
    CL(0, k) = a[k + 1] - a[0] * bq[k + 1];
    if (k > 0) AL(k, k - 1) = 1.0;
  }
  if (m > 0) BL(0, 0) = 1.0;

  std::vector<Complex> Lt(ctx.grid.size());
  for (std::size_t k = 0; k < Lt.size(); ++k) Lt[k] = out.num(ctx.grid.omega(k)) / out.den(ctx.grid.omega(k));
  const BBar bb = map_F4(Lt, ctx);
  out.bbar = bb.value;
  out.K = controller_from_dual(ctx, bb, Lt);

  const RiccatiData& r = ctx.ric;
  const StateSpaceSystem& s = ctx.sys;
  const int n = s.dx();
  const Matrix P12 = m > 0 ? solve_stein(r.A_bar, AL, r.D_bar * CL) : Matrix(n, 0);
  const Matrix BtP = s.Bu.transpose();
  const auto Rs = r.R_u.ldlt();
  const Matrix Kxi = m > 0 ? Matrix(Rs.solve(BtP * (r.P * s.Bw * CL + P12 * AL))) : Matrix(s.du(), 0);
  const Matrix Ke = Rs.solve(BtP * (r.P * s.Bw * d + (m > 0 ? Matrix(P12 * BL) : Matrix::Zero(n, 1))));

  const Matrix Fxi = -Kxi + Ke * CL / d;
  StateSpaceController& K = out.realization;
  K.A = Matrix::Zero(n + m, n + m);
  K.A.topLeftCorner(n, n) = r.A_K;
  K.A.topRightCorner(n, m) = s.Bu * Fxi;
  K.A.bottomRightCorner(m, m) = AL - BL * CL / d;
  K.B = Matrix(n + m, 1);
  K.B.topRows(n) = s.Bw - s.Bu * Ke / d;
  K.B.bottomRows(m) = BL / d;
  K.C = Matrix(s.du(), n + m);
  K.C.leftCols(n) = -r.K_lqr;
  K.C.rightCols(m) = Fxi;
  K.D = -Ke / d;
  return out;
}

namespace {

nlohmann::json mat(const Matrix& M) {
  nlohmann::json j = nlohmann::json::array();
  for (Eigen::Index i = 0; i < M.rows(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (Eigen::Index c = 0; c < M.cols(); ++c) row.push_back(M(i, c));
    j.push_back(row);
  }
  return j;
}

nlohmann::json vec(const Vector& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

}  // namespace

std::string approx_to_json(const RationalSpectrum& rspec, const ApproxController& ac) {
  nlohmann::json j;
  j["m"] = rspec.m;
  j["p_coeffs"] = vec(rspec.p.coeffs);
  j["q_coeffs"] = vec(rspec.q.coeffs);
  j["achieved_eps"] = rspec.achieved_eps;
  j["A_k"] = mat(ac.realization.A);
  j["B_k"] = mat(ac.realization.B);
  j["C_k"] = mat(ac.realization.C);
  j["D_k"] = mat(ac.realization.D);
  return j.dump(2);
}

}  // namespace mixedh2
