#pragma once

#include <vector>

#include "mixedh2/lti.hpp"

namespace mixedh2 {

/// Stabilizing DARE solution for unit weights and the derived data of the
/// finite parameterization: A_bar = A_K^T, C_bar = -U^{-T} Bu^T,
/// D_bar = A_K^T P Bw, where R_u = U^T U (U upper triangular).
struct RiccatiData {
  Matrix P;
  Matrix K_lqr;
  Matrix R_u;
  Matrix U;
  Matrix A_K;
  Matrix A_bar;
  Matrix C_bar;
  Matrix D_bar;
  double residual = 0.0;  // ||DARE(P) - P|| / max(1, ||P||)
};

RiccatiData solve_lqr_riccati(const StateSpaceSystem& sys);

// Solves X = M X N + C by vectorization. Intended for small dimensions.
Matrix solve_stein(const Matrix& M, const Matrix& N, const Matrix& C);

double spectral_radius(const Matrix& M);

/// Frequency samples shared by every gamma for a fixed plant.
struct StaticGridData {
  GridSpectrum Delta;       // U (I + K_lqr F)
  GridSpectrum Knc;         // -(I + F*F)^{-1} F*G
  GridSpectrum TkncSq;      // G*G - G*F (I + F*F)^{-1} F*G
  GridSpectrum SminusBase;  // C_bar (e^{-jw} I - A_bar)^{-1} D_bar
};

GridSpectrum delta_factor(const StateSpaceSystem& sys, const RiccatiData& ric, const FrequencyGrid& grid);

struct NoncausalData {
  GridSpectrum Knc;
  GridSpectrum TkncSq;
};
NoncausalData noncausal_controller(const GridSpectrum& F, const GridSpectrum& G);

// Samples of C_bar (e^{-jw} I - A_bar)^{-1} B for an arbitrary dx x 1 vector.
GridSpectrum anticausal_part(const RiccatiData& ric, const Vector& bbar, const FrequencyGrid& grid);

/// Everything needed to run the dual iteration for one plant on one grid.
/// Immutable after construction and safe to share across threads.
struct SynthesisContext {
  StateSpaceSystem sys;
  FrequencyGrid grid;
  RiccatiData ric;
  PlantResponse plant;
  StaticGridData stat;

  std::vector<CMatrix> anti_row;   // C_bar (e^{-jw} I - A_bar)^{-1}
  std::vector<CVector> quad_col;   // (I - e^{jw} A_bar)^{-1} D_bar
  std::vector<CMatrix> delta_inv;  // Delta^{-1}
  Vector tknc;                     // real samples of TkncSq
  double noncausal_bound = 0.0;    // sqrt(max TkncSq)

  SynthesisContext(const StateSpaceSystem& s, const FrequencyGrid& g);
};

GridSpectrum h2_controller(const StaticGridData& stat, const RiccatiData& ric);

// u = -K_lqr x - K_w w in transfer form: K_2(z) = -K_lqr (zI - A_K)^{-1}(Bw - Bu K_w) - K_w.
StateSpaceController h2_controller_realization(const StateSpaceSystem& sys, const RiccatiData& ric);

double gamma_two(const SynthesisContext& ctx);
double gamma_two(const StateSpaceSystem& sys, const FrequencyGrid& grid);

struct GammaInfOptions {
  double rel_tol = 1e-3;
  int max_iter = 2000;
  double fp_tol = 1e-9;
};

// Infimum of gamma for which the dual iteration converges and meets the
// H-infinity constraint, by bisection.
double gamma_inf_estimate(const SynthesisContext& ctx, const GammaInfOptions& opt = {});
double gamma_inf_estimate(const StateSpaceSystem& sys, const FrequencyGrid& grid);

}  // namespace mixedh2
