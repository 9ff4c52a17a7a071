#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "mixedh2/synthesis.hpp"

namespace mixedh2 {

/// Finite dual parameter B_bar (dx-vector for a scalar disturbance).
struct BBar {
  Vector value;
};

struct FixedPointConfig {
  double gamma = 0.0;
  double tol = 1e-9;  // scaled by max(1, ||N||_inf)
  int max_iter = 500;
  bool trace = false;
  std::ostream* trace_out = nullptr;  // JSON lines, one per iteration
  std::optional<double> gamma_inf_hint;
};

enum class FixedPointStatus { kConverged, kMaxIterExceeded, kNonConverged, kDiverged };

const char* to_string(FixedPointStatus s);

struct IterationState {
  BBar bbar;
  Vector Nspec;                // real samples of N, >= 1
  std::vector<Complex> Lspec;  // spectral factor of Nspec
  int iter = 0;
  double residual = 0.0;       // sup-norm change of N at the last step
};

struct FixedPointResult {
  IterationState state;
  GridSpectrum K;
  FixedPointStatus status = FixedPointStatus::kConverged;
  std::string diagnostic;

  bool converged() const { return status == FixedPointStatus::kConverged; }
};

// F1: B_bar -> S_-(w) = C_bar (e^{-jw} I - A_bar)^{-1} B_bar.
GridSpectrum map_F1(const BBar& bbar, const SynthesisContext& ctx);
// F2: N = max(|S_-|^2 / (gamma^2 - TkncSq), 1). Throws GammaTooSmall.
Vector map_F2(const GridSpectrum& Sminus, const Vector& TkncSq, double gamma);
GridSpectrum map_F2(const GridSpectrum& Sminus, const GridSpectrum& TkncSq, double gamma);
// F4 by trapezoidal quadrature.
BBar map_F4(const std::vector<Complex>& L, const SynthesisContext& ctx);
BBar map_F4(const GridSpectrum& L, const SynthesisContext& ctx);
// F4 as the series sum_k A_bar^k D_bar l_k over the causal coefficients of L.
BBar map_F4_series(const std::vector<Complex>& L, const RiccatiData& ric);

// K = K_nc - Delta^{-1} S_- L^{-1}.
GridSpectrum controller_from_dual(const SynthesisContext& ctx, const BBar& bbar, const std::vector<Complex>& L);

FixedPointResult run_fixed_point(const SynthesisContext& ctx, const FixedPointConfig& cfg);
FixedPointResult run_fixed_point(const StateSpaceSystem& sys, const FrequencyGrid& grid, const FixedPointConfig& cfg);

// Throws MaxIterExceeded / NonConverged for a result that did not converge.
void require_converged(const FixedPointResult& r);

struct KktBreakdown {
  double fixed_point = 0.0;   // |N - F2(F1(B_bar))| / max(1, ||N||)
  double slackness = 0.0;     // (N - 1) max(0, sigma^2 - gamma^2) / (gamma^2 max(1, ||N||))
  double feasibility = 0.0;   // max(0, sigma^2 - gamma^2 - tol_feas) / gamma^2
  double total() const;
};

KktBreakdown kkt_breakdown(const IterationState& state, const SynthesisContext& ctx, double gamma);
double kkt_residual(const IterationState& state, const SynthesisContext& ctx, double gamma);

// 1 + |q(w)| with q a degree-4 trigonometric polynomial, N(0,1) coefficients.
Vector random_initial_spectrum(const FrequencyGrid& grid, std::mt19937_64& rng);

// One sweep F2 o F1 o F4 o F3.
Vector sweep(const SynthesisContext& ctx, const Vector& N, double gamma);

// One ratio per seed; each seed draws its own pair of initial spectra.
std::vector<double> contraction_ratio(const SynthesisContext& ctx, double gamma,
                                      const std::vector<std::uint64_t>& seeds);

}  // namespace mixedh2
