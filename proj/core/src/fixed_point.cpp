#include "mixedh2/fixed_point.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>

#include "fft.hpp"
#include "mixedh2/errors.hpp"
#include "mixedh2/log.hpp"
#include "mixedh2/spectral.hpp"

namespace mixedh2 {

const char* to_string(FixedPointStatus s) {
  switch (s) {
    case FixedPointStatus::kConverged: return "converged";
    case FixedPointStatus::kMaxIterExceeded: return "max_iter_exceeded";
    case FixedPointStatus::kNonConverged: return "non_converged";
    case FixedPointStatus::kDiverged: return "diverged";
  }
  return "unknown";
}

GridSpectrum map_F1(const BBar& bbar, const SynthesisContext& ctx) {
  if (bbar.value.size() != ctx.sys.dx()) throw Error(ErrorCode::kInvalidArgument, "B_bar has wrong dimension");
  GridSpectrum S(ctx.grid, ctx.sys.du(), 1);
  const CVector b = bbar.value.cast<Complex>();
  for (std::size_t k = 0; k < S.size(); ++k) S.values[k] = ctx.anti_row[k] * b;
  return S;
}

Vector map_F2(const GridSpectrum& Sminus, const Vector& TkncSq, double gamma) {
  if (static_cast<std::size_t>(TkncSq.size()) != Sminus.size())
    throw Error(ErrorCode::kGridMismatch, "map_F2: sample counts differ");
  const double g2 = gamma * gamma;
  Vector N(TkncSq.size());
  for (Eigen::Index k = 0; k < N.size(); ++k) {
    const double den = g2 - TkncSq[k];
    if (!(den > 0.0)) {
      std::ostringstream os;
      os << "gamma^2 - TkncSq = " << den << " at omega = " << Sminus.grid.omega(static_cast<std::size_t>(k));
      throw Error(ErrorCode::kGammaTooSmall, os.str());
    }
    N[k] = std::max(Sminus.values[static_cast<std::size_t>(k)].squaredNorm() / den, 1.0);
  }
  return N;
}

GridSpectrum map_F2(const GridSpectrum& Sminus, const GridSpectrum& TkncSq, double gamma) {
  if (Sminus.grid != TkncSq.grid) throw Error(ErrorCode::kGridMismatch, "map_F2: grids differ");
  return GridSpectrum::scalar(Sminus.grid, map_F2(Sminus, TkncSq.real_values(), gamma));
}

BBar map_F4(const std::vector<Complex>& L, const SynthesisContext& ctx) {
  if (L.size() != ctx.grid.size()) throw Error(ErrorCode::kGridMismatch, "map_F4: sample count differs");
  CVector acc = CVector::Zero(ctx.sys.dx());
  for (std::size_t k = 0; k < L.size(); ++k) acc += ctx.quad_col[k] * L[k];
  return BBar{acc.real() / static_cast<double>(L.size())};
}

BBar map_F4(const GridSpectrum& L, const SynthesisContext& ctx) { return map_F4(L.scalar_values(), ctx); }

BBar map_F4_series(const std::vector<Complex>& L, const RiccatiData& ric) {
  const detail::cvec c = detail::coefficients(L);
  Vector term = ric.D_bar.col(0);
  Vector acc = Vector::Zero(term.size());
  for (std::size_t t = 0; t < c.size() / 2; ++t) {
    acc += term * c[t].real();
    term = ric.A_bar * term;
  }
  return BBar{acc};
}

GridSpectrum controller_from_dual(const SynthesisContext& ctx, const BBar& bbar, const std::vector<Complex>& L) {
  const GridSpectrum S = map_F1(bbar, ctx);
  GridSpectrum K(ctx.grid, ctx.sys.du(), 1);
  for (std::size_t k = 0; k < K.size(); ++k)
    K.values[k] = ctx.stat.Knc.values[k] - ctx.delta_inv[k] * S.values[k] / L[k];
  return K;
}

namespace {

void emit_trace(std::ostream& os, int iter, double residual, const Vector& b, const Vector& N) {
  char buf[256];
  std::snprintf(buf, sizeof buf, "{\"iter\":%d,\"residual\":%.17g,\"bbar_norm\":%.17g,\"min_N\":%.17g,\"max_N\":%.17g}\n",
                iter, residual, b.norm(), N.minCoeff(), N.maxCoeff());
  os << buf;
}

}  // namespace

FixedPointResult run_fixed_point(const SynthesisContext& ctx, const FixedPointConfig& cfg) {
  if (!(cfg.gamma > 0.0) || !std::isfinite(cfg.gamma)) throw Error(ErrorCode::kInvalidArgument, "gamma must be positive");
  if (cfg.max_iter < 1) throw Error(ErrorCode::kInvalidArgument, "max_iter must be positive");
  if (cfg.gamma_inf_hint && cfg.gamma <= *cfg.gamma_inf_hint * (1.0 + 1e-3))
    warn("gamma is within 1e-3 of the gamma_inf estimate; convergence may be slow");

  FixedPointResult res;
  BBar b{Vector::Zero(ctx.sys.dx())};
  Vector prev;
  IterationState& st = res.state;
  bool done = false;
  for (int it = 0; it <= cfg.max_iter; ++it) {
    const Vector N = map_F2(map_F1(b, ctx), ctx.tknc, cfg.gamma);
    const double nmax = N.maxCoeff();
    if (!N.allFinite() || nmax > 1e14) {
      res.status = FixedPointStatus::kDiverged;
      res.diagnostic = "dual spectrum diverged";
      st.bbar = b;
      st.Nspec = N.allFinite() ? N : Vector::Ones(N.size());
      st.Lspec.assign(ctx.grid.size(), Complex(1.0));
      st.iter = it;
      st.residual = std::numeric_limits<double>::infinity();
      res.K = controller_from_dual(ctx, BBar{Vector::Zero(ctx.sys.dx())}, st.Lspec);
      return res;
    }
    const double residual = prev.size() ? (N - prev).cwiseAbs().maxCoeff() : std::numeric_limits<double>::infinity();
    if (cfg.trace && cfg.trace_out) emit_trace(*cfg.trace_out, it, prev.size() ? residual : -1.0, b.value, N);
    st.Nspec = N;
    st.iter = it;
    st.residual = residual;
    st.Lspec = cepstral_factor(N);
    b = map_F4(st.Lspec, ctx);
    if (residual < cfg.tol * std::max(1.0, nmax)) {
      done = true;
      break;
    }
    prev = N;
  }
  st.bbar = b;
  res.K = controller_from_dual(ctx, st.bbar, st.Lspec);
  if (done) {
    res.status = FixedPointStatus::kConverged;
    return res;
  }
  const double hinf = hinf_norm(closed_loop(ctx.plant.F, ctx.plant.G, res.K));
  std::ostringstream os;
  os << "no convergence after " << cfg.max_iter << " iterations; residual " << st.residual << ", hinf " << hinf;
  res.diagnostic = os.str();
  res.status = hinf > cfg.gamma * (1.0 + 1e-4) ? FixedPointStatus::kNonConverged : FixedPointStatus::kMaxIterExceeded;
  return res;
}

FixedPointResult run_fixed_point(const StateSpaceSystem& sys, const FrequencyGrid& grid, const FixedPointConfig& cfg) {
  return run_fixed_point(SynthesisContext(sys, grid), cfg);
}

void require_converged(const FixedPointResult& r) {
  switch (r.status) {
    case FixedPointStatus::kConverged: return;
    case FixedPointStatus::kMaxIterExceeded: throw Error(ErrorCode::kMaxIterExceeded, r.diagnostic);
    case FixedPointStatus::kNonConverged:
    case FixedPointStatus::kDiverged: throw Error(ErrorCode::kNonConverged, r.diagnostic);
  }
}

double KktBreakdown::total() const { return std::max({fixed_point, slackness, feasibility}); }

KktBreakdown kkt_breakdown(const IterationState& state, const SynthesisContext& ctx, double gamma) {
  const double g2 = gamma * gamma;
  const double scale = std::max(1.0, state.Nspec.cwiseAbs().maxCoeff());
  KktBreakdown out;
  const Vector Nf = map_F2(map_F1(state.bbar, ctx), ctx.tknc, gamma);
  out.fixed_point = (state.Nspec - Nf).cwiseAbs().maxCoeff() / scale;
  const GridSpectrum K = controller_from_dual(ctx, state.bbar, state.Lspec);
  const Vector s2 = sigma_max_squared(closed_loop(ctx.plant.F, ctx.plant.G, K));
  const double tol_feas = 2e-6 * g2;
  for (Eigen::Index k = 0; k < s2.size(); ++k) {
    const double excess = std::max(0.0, s2[k] - g2);
    out.slackness = std::max(out.slackness, (state.Nspec[k] - 1.0) * excess / (g2 * scale));
    out.feasibility = std::max(out.feasibility, std::max(0.0, s2[k] - g2 - tol_feas) / g2);
  }
  return out;
}

double kkt_residual(const IterationState& state, const SynthesisContext& ctx, double gamma) {
  return kkt_breakdown(state, ctx, gamma).total();
}

Vector random_initial_spectrum(const FrequencyGrid& grid, std::mt19937_64& rng) {
  std::normal_distribution<double> nd(0.0, 1.0);
  LaurentPolynomial q{Vector(5)};
  for (Eigen::Index k = 0; k < 5; ++k) q.coeffs[k] = nd(rng);
  return (1.0 + q.sample(grid).array().abs()).matrix();
}

Vector sweep(const SynthesisContext& ctx, const Vector& N, double gamma) {
  return map_F2(map_F1(map_F4(cepstral_factor(N), ctx), ctx), ctx.tknc, gamma);
}

std::vector<double> contraction_ratio(const SynthesisContext& ctx, double gamma,
                                      const std::vector<std::uint64_t>& seeds) {
  std::vector<double> out;
  out.reserve(seeds.size());
  for (std::uint64_t s : seeds) {
    std::mt19937_64 rng(s);
    const Vector N1 = random_initial_spectrum(ctx.grid, rng);
    const Vector N2 = random_initial_spectrum(ctx.grid, rng);
    const double d0 = (N1 - N2).cwiseAbs().maxCoeff();
    if (d0 == 0.0) {
      out.push_back(0.0);
      continue;
    }
    out.push_back((sweep(ctx, N1, gamma) - sweep(ctx, N2, gamma)).cwiseAbs().maxCoeff() / d0);
  }
  return out;
}

}  // namespace mixedh2
