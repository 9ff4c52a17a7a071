#include <cmath>
#include <sstream>

#include "mixedh2/errors.hpp"
#include "mixedh2/fixed_point.hpp"

namespace mixedh2 {

namespace {

bool feasible(const SynthesisContext& ctx, double gamma, const GammaInfOptions& opt) {
  if (gamma <= ctx.noncausal_bound) return false;
  FixedPointConfig cfg;
  cfg.gamma = gamma;
  cfg.tol = opt.fp_tol;
  cfg.max_iter = opt.max_iter;
  FixedPointResult r;
  try {
    r = run_fixed_point(ctx, cfg);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kGammaTooSmall || e.code() == ErrorCode::kNonPositiveSpectrum) return false;
    throw;
  }
  if (!r.converged() || !r.state.bbar.value.allFinite()) return false;
  return hinf_norm(closed_loop(ctx.plant.F, ctx.plant.G, r.K)) <= gamma * (1.0 + 1e-6);
}

}  // namespace

double gamma_inf_estimate(const SynthesisContext& ctx, const GammaInfOptions& opt) {
  const double g2 = gamma_two(ctx);
  double lo = ctx.noncausal_bound * (1.0 + 1e-12);
  double hi = g2;
  if (!(lo < hi)) return g2;
  while (!feasible(ctx, hi, opt)) {
    lo = hi;
    hi *= 2.0;
    if (hi > 1e3 * g2) {
      std::ostringstream os;
      os << "no feasible gamma up to " << 1e3 * g2;
      throw Error(ErrorCode::kBisectionBracketFailure, os.str());
    }
  }
  while ((hi - lo) > opt.rel_tol * hi) {
    const double mid = 0.5 * (lo + hi);
    if (feasible(ctx, mid, opt))
      hi = mid;
    else
      lo = mid;
  }
  return hi;
}

double gamma_inf_estimate(const StateSpaceSystem& sys, const FrequencyGrid& grid) {
  return gamma_inf_estimate(SynthesisContext(sys, grid));
}

}  // namespace mixedh2
