#pragma once

#include <optional>
#include <string>
#include <variant>

#include "mixedh2/spectral.hpp"
#include "mixedh2/synthesis.hpp"

namespace mixedh2 {

/// Gram matrices of the numerator and denominator trigonometric polynomials:
/// p(w) = v(w)* P v(w), q(w) = v(w)* Q v(w), v(w) = (1, e^{jw}, ..., e^{jmw}).
struct GramPair {
  Matrix P;
  Matrix Q;

  int order() const { return static_cast<int>(P.rows()) - 1; }
  LaurentPolynomial p() const;
  LaurentPolynomial q() const;
};

// Laurent coefficients of a Gram matrix: c_k = sum of the k-th diagonal.
LaurentPolynomial gram_to_laurent(const Matrix& G);

struct Infeasible {
  double violation = 0.0;  // in units of the input spectrum
  double omega = 0.0;
  std::string constraint;  // "upper", "lower" or "q_margin"
};

struct FeasibilityOptions {
  double delta_q = 1e-6;  // lower bound on q at the samples (q has unit mean)
  double slack = 1e-8;    // accepted violation, relative to max N
  int max_iter = 200;     // interior-point iterations per check
};

// Samples used for an order-m approximation on a grid: every k-th grid point,
// with at least max(16 (m + 1), 128) points (capped at the grid size).
std::vector<std::size_t> constraint_samples(const FrequencyGrid& grid, int m);

// Sampled Gram-pair feasibility for |p/q - N| <= eps. Solves the linear
// program "maximize the common slack s of all sampled constraints" over the
// Laurent coefficients, with p, q kept positive on an 8x finer grid; the point
// is feasible when s >= -slack. The Gram pair is built from the canonical
// factors (P = l_p l_p^T), so it is PSD by construction. Throws SolverStall if
// the interior-point iteration does not converge.
std::variant<GramPair, Infeasible> feasibility_check(const Vector& omegas, const Vector& N, int m, double eps,
                                                     const FeasibilityOptions& opt = {});
std::variant<GramPair, Infeasible> feasibility_check(const GridSpectrum& N, int m, double eps,
                                                     const FeasibilityOptions& opt = {});

struct RationalSpectrum {
  LaurentPolynomial p;
  LaurentPolynomial q;     // unit mean
  double achieved_eps = 0.0;  // max over the constraint samples of |p/q - N|
  int m = 0;

  double operator()(double omega) const { return p(omega) / q(omega); }
};

// Bisection on eps to relative width 1e-3. Pass hi <= 0 to use max N - min N.
RationalSpectrum min_epsilon(const GridSpectrum& N, int m, double lo = 0.0, double hi = 0.0,
                             const FeasibilityOptions& opt = {});

struct ApproxController {
  GridSpectrum K;
  StateSpaceController realization;
  CausalPolynomial num;  // L~ = num / den, den(0) = 1
  CausalPolynomial den;
  Vector bbar;
};

ApproxController approx_controller(const SynthesisContext& ctx, const RationalSpectrum& rspec);

// {m, p_coeffs, q_coeffs, achieved_eps, A_k, B_k, C_k, D_k}
std::string approx_to_json(const RationalSpectrum& rspec, const ApproxController& ac);

}  // namespace mixedh2
