#pragma once

#include <Eigen/Dense>

namespace mixedh2::detail {

struct LpResult {
  Eigen::VectorXd x;
  Eigen::VectorXd z;  // multipliers of G x <= h
  double objective = 0.0;
  int iterations = 0;
  bool converged = false;
};

// maximize c^T x subject to G x <= h, by a Mehrotra predictor-corrector
// primal-dual interior-point method. x0 need not be feasible.
LpResult lp_maximize(const Eigen::VectorXd& c, const Eigen::MatrixXd& G, const Eigen::VectorXd& h,
                     const Eigen::VectorXd& x0, int max_iter = 200, double tol = 1e-11);

}  // namespace mixedh2::detail
