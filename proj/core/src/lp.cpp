#include "lp.hpp"

#include <algorithm>
#include <cmath>

namespace mixedh2::detail {

namespace {

using Eigen::VectorXd;

double max_step(const VectorXd& v, const VectorXd& dv) {
  double a = 1.0;
  for (Eigen::Index i = 0; i < v.size(); ++i)
    if (dv[i] < 0.0) a = std::min(a, -v[i] / dv[i]);
  return a;
}

}  // namespace

LpResult lp_maximize(const VectorXd& c, const Eigen::MatrixXd& G, const VectorXd& h, const VectorXd& x0, int max_iter,
                     double tol) {
  const Eigen::Index m = G.rows();
  LpResult r;
  r.x = x0;
  VectorXd w = (h - G * r.x).cwiseMax(1.0);
  r.z = VectorXd::Ones(m);
  const double hn = 1.0 + h.cwiseAbs().maxCoeff();
  const double cn = 1.0 + c.cwiseAbs().maxCoeff();

  for (int it = 0; it < max_iter; ++it) {
    r.iterations = it;
    const VectorXd rp = G * r.x + w - h;
    const VectorXd rd = G.transpose() * r.z - c;
    const double mu = w.dot(r.z) / static_cast<double>(m);
    const double obj = c.dot(r.x);
    // The dual residual stalls near round-off on degenerate problems; the
    // primal test stays tight.
    const double zn = cn + (G.cwiseAbs().transpose() * r.z).maxCoeff();
    if (rp.cwiseAbs().maxCoeff() <= tol * hn && rd.cwiseAbs().maxCoeff() <= std::sqrt(tol) * zn &&
        mu <= tol * (1.0 + std::abs(obj))) {
      r.converged = true;
      break;
    }
    if (!r.x.allFinite() || !r.z.allFinite()) break;

    const VectorXd d = r.z.cwiseQuotient(w);
    Eigen::MatrixXd M = G.transpose() * d.asDiagonal() * G;
    M.diagonal().array() += 1e-14 * (1.0 + M.diagonal().cwiseAbs().maxCoeff());
    const Eigen::LDLT<Eigen::MatrixXd> ldlt(M);
    const Eigen::MatrixXd Gd = d.asDiagonal() * G;

    // rc is the complementarity target: W Z e -> rc.
    auto solve = [&](const VectorXd& rc, VectorXd& dx, VectorXd& dw, VectorXd& dz) {
      // Z dw + W dz = rc - W Z e, G dx + dw = -rp, G^T dz = -rd.
      const VectorXd t = (rc - w.cwiseProduct(r.z)).cwiseQuotient(w);  // W^{-1}(rc - WZe)
      const VectorXd rhs = -rd - G.transpose() * (t + d.cwiseProduct(rp));
      dx = ldlt.solve(rhs);
      for (int k = 0; k < 2; ++k) dx += ldlt.solve(rhs - G.transpose() * (Gd * dx));
      dw = -rp - G * dx;
      dz = t - d.cwiseProduct(dw);
    };

    VectorXd dxa, dwa, dza;
    solve(VectorXd::Zero(m), dxa, dwa, dza);
    const double ap = max_step(w, dwa), ad = max_step(r.z, dza);
    const double mu_aff = (w + ap * dwa).dot(r.z + ad * dza) / static_cast<double>(m);
    const double sigma = std::pow(std::clamp(mu_aff / std::max(mu, 1e-300), 0.0, 1.0), 3);

    VectorXd dx, dw, dz;
    solve(VectorXd::Constant(m, sigma * mu) - dwa.cwiseProduct(dza), dx, dw, dz);
    const double step_p = std::min(1.0, 0.99 * max_step(w, dw));
    const double step_d = std::min(1.0, 0.99 * max_step(r.z, dz));
    r.x += step_p * dx;
    w += step_p * dw;
    r.z += step_d * dz;
  }
  r.objective = c.dot(r.x);
  return r;
}

}  // namespace mixedh2::detail
