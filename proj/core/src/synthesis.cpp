#include "mixedh2/synthesis.hpp"

#include <algorithm>
#include <cmath>

#include "mixedh2/errors.hpp"

namespace mixedh2 {

GridSpectrum delta_factor(const StateSpaceSystem& sys, const RiccatiData& ric, const FrequencyGrid& grid) {
  const PlantResponse pr = eval_plant(sys, grid);
  const int du = sys.du();
  GridSpectrum D(grid, du, du);
  const CMatrix U = ric.U.cast<Complex>();
  const CMatrix K = ric.K_lqr.cast<Complex>();
  for (std::size_t k = 0; k < grid.size(); ++k) D.values[k] = U * (CMatrix::Identity(du, du) + K * pr.F.values[k]);
  return D;
}

NoncausalData noncausal_controller(const GridSpectrum& F, const GridSpectrum& G) {
  if (F.grid != G.grid || F.rows != G.rows) throw Error(ErrorCode::kGridMismatch, "noncausal_controller: F, G differ");
  NoncausalData out{GridSpectrum(F.grid, F.cols, G.cols), GridSpectrum(F.grid, G.cols, G.cols, true)};
  for (std::size_t k = 0; k < F.size(); ++k) {
    const CMatrix& f = F.values[k];
    const CMatrix& g = G.values[k];
    const CMatrix FhG = f.adjoint() * g;
    Eigen::LDLT<CMatrix> M(CMatrix::Identity(F.cols, F.cols) + f.adjoint() * f);
    out.Knc.values[k] = -M.solve(FhG);
    CMatrix T = g.adjoint() * g - FhG.adjoint() * M.solve(FhG);
    T = 0.5 * (T + T.adjoint()).eval();
    for (Eigen::Index i = 0; i < T.rows(); ++i) T(i, i) = T(i, i).real();
    out.TkncSq.values[k] = T;
  }
  return out;
}

GridSpectrum anticausal_part(const RiccatiData& ric, const Vector& bbar, const FrequencyGrid& grid) {
  const Eigen::Index n = ric.A_bar.rows();
  GridSpectrum S(grid, static_cast<int>(ric.C_bar.rows()), 1);
  const CMatrix Ab = ric.A_bar.cast<Complex>();
  const CMatrix Cb = ric.C_bar.cast<Complex>();
  const CVector b = bbar.cast<Complex>();
  for (std::size_t k = 0; k < grid.size(); ++k) {
    CMatrix M = std::conj(grid.z(k)) * CMatrix::Identity(n, n) - Ab;
    S.values[k] = Cb * M.partialPivLu().solve(b);
  }
  return S;
}

SynthesisContext::SynthesisContext(const StateSpaceSystem& s, const FrequencyGrid& g)
    : sys(s), grid(FrequencyGrid::for_system(g.size(), s.dx())), ric(solve_lqr_riccati(s)), plant(eval_plant(s, g)) {
  const int n = sys.dx();
  const int du = sys.du();
  const std::size_t N = grid.size();
  stat.Delta = GridSpectrum(grid, du, du);
  const CMatrix U = ric.U.cast<Complex>();
  const CMatrix K = ric.K_lqr.cast<Complex>();
  for (std::size_t k = 0; k < N; ++k) stat.Delta.values[k] = U * (CMatrix::Identity(du, du) + K * plant.F.values[k]);
  NoncausalData nc = noncausal_controller(plant.F, plant.G);
  stat.Knc = std::move(nc.Knc);
  stat.TkncSq = std::move(nc.TkncSq);

  const CMatrix Ab = ric.A_bar.cast<Complex>();
  const CMatrix Cb = ric.C_bar.cast<Complex>();
  const CVector Db = ric.D_bar.col(0).cast<Complex>();
  const CMatrix I = CMatrix::Identity(n, n);
  anti_row.resize(N);
  quad_col.resize(N);
  delta_inv.resize(N);
  tknc.resize(static_cast<Eigen::Index>(N));
  stat.SminusBase = GridSpectrum(grid, du, 1);
  for (std::size_t k = 0; k < N; ++k) {
    const Complex z = grid.z(k);
    // Row form: C_bar (conj(z) I - A_bar)^{-1} = ((conj(z) I - A_bar)^{-T} C_bar^T)^T.
    CMatrix Mt = (std::conj(z) * I - Ab).transpose();
    anti_row[k] = Mt.partialPivLu().solve(Cb.transpose()).transpose();
    quad_col[k] = (I - z * Ab).partialPivLu().solve(Db);
    delta_inv[k] = stat.Delta.values[k].inverse();
    tknc[static_cast<Eigen::Index>(k)] = stat.TkncSq.values[k](0, 0).real();
    stat.SminusBase.values[k] = anti_row[k] * Db;
  }
  noncausal_bound = std::sqrt(std::max(0.0, tknc.maxCoeff()));
}

GridSpectrum h2_controller(const StaticGridData& stat, const RiccatiData&) {
  GridSpectrum K(stat.Knc.grid, stat.Knc.rows, stat.Knc.cols);
  for (std::size_t k = 0; k < K.size(); ++k)
    K.values[k] = stat.Knc.values[k] - stat.Delta.values[k].partialPivLu().solve(stat.SminusBase.values[k]);
  return K;
}

StateSpaceController h2_controller_realization(const StateSpaceSystem& sys, const RiccatiData& ric) {
  const Matrix Kw = ric.R_u.ldlt().solve(sys.Bu.transpose() * ric.P * sys.Bw);
  return StateSpaceController{ric.A_K, sys.Bw - sys.Bu * Kw, -ric.K_lqr, -Kw};
}

double gamma_two(const SynthesisContext& ctx) {
  const GridSpectrum K2 = h2_controller(ctx.stat, ctx.ric);
  const GridSpectrum T = closed_loop(ctx.plant.F, ctx.plant.G, K2);
  return hinf_norm(T, closed_loop_response(ctx.sys, h2_controller_realization(ctx.sys, ctx.ric)));
}

double gamma_two(const StateSpaceSystem& sys, const FrequencyGrid& grid) {
  return gamma_two(SynthesisContext(sys, grid));
}

}  // namespace mixedh2
