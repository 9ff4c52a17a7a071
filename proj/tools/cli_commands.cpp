#include "cli_commands.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <future>
#include <iomanip>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "builtin_systems.hpp"
#include "mixedh2/errors.hpp"
#include "mixedh2/fixed_point.hpp"
#include "mixedh2/io.hpp"
#include "mixedh2/rational_approx.hpp"

namespace mixedh2::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kMaxIter = 2000;

std::string g6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

struct Session {
  ResolvedSystem rs;
  SynthesisContext ctx;
  StateSpaceController k2;
  double gamma2;
  std::optional<double> ginf;

  Session(const RunConfig& cfg, std::ostream& log)
      : rs(resolve_system(cfg.system, cfg.bw_file)),
        ctx(rs.sys, FrequencyGrid(cfg.grid_N)),
        k2(h2_controller_realization(ctx.sys, ctx.ric)),
        gamma2(gamma_two(ctx)) {
    if (rs.bw_source == "default_bu")
      log << "NOTICE: B_w not supplied for " << rs.sys.name
          << "; using B_w = B_u. This is not the benchmark disturbance input and table values will differ.\n";
  }

  double gamma_inf() {
    if (!ginf) ginf = gamma_inf_estimate(ctx);
    return *ginf;
  }
};

struct Norms {
  double h2 = 0.0;
  double hinf = 0.0;
};

Norms norms_of(const SynthesisContext& ctx, const GridSpectrum& K, const StateSpaceController* real = nullptr) {
  const GridSpectrum T = closed_loop(ctx.plant.F, ctx.plant.G, K);
  Norms n;
  n.h2 = h2_norm(T);
  n.hinf = real ? hinf_norm(T, closed_loop_response(ctx.sys, *real)) : hinf_norm(T);
  return n;
}

FixedPointResult mixed(const SynthesisContext& ctx, double gamma, std::ostream* trace) {
  FixedPointConfig fc;
  fc.gamma = gamma;
  fc.max_iter = kMaxIter;
  fc.trace = trace != nullptr;
  fc.trace_out = trace;
  FixedPointResult r = run_fixed_point(ctx, fc);
  require_converged(r);
  return r;
}

// Runs f(i) for i in [0, n) with up to `jobs` concurrent tasks; results keep
// index order.
template <class T>
std::vector<T> parallel_map(std::size_t n, int jobs, const std::function<T(std::size_t)>& f) {
  std::vector<T> out(n);
  if (jobs <= 1) {
    for (std::size_t i = 0; i < n; ++i) out[i] = f(i);
    return out;
  }
  for (std::size_t start = 0; start < n; start += static_cast<std::size_t>(jobs)) {
    std::vector<std::future<T>> fut;
    const std::size_t stop = std::min(n, start + static_cast<std::size_t>(jobs));
    for (std::size_t i = start; i < stop; ++i) fut.push_back(std::async(std::launch::async, f, i));
    for (std::size_t i = start; i < stop; ++i) out[i] = fut[i - start].get();
  }
  return out;
}

void require_gammas(const RunConfig& cfg) {
  if (cfg.gammas.empty()) throw Error(ErrorCode::kInvalidArgument, "at least one --gamma is required");
  for (double g : cfg.gammas)
    if (!(g > 0.0)) throw Error(ErrorCode::kInvalidArgument, "gammas must be positive");
}

std::vector<int> orders_or_default(const RunConfig& cfg) {
  if (cfg.ra_orders.empty()) return {1, 3, 6};
  for (int m : cfg.ra_orders)
    if (m < 0) throw Error(ErrorCode::kInvalidArgument, "approximation orders must be non-negative");
  return cfg.ra_orders;
}

fs::path out_path(const RunConfig& cfg, const std::string& name) {
  fs::create_directories(cfg.output_dir);
  return fs::path(cfg.output_dir) / name;
}

struct RaRun {
  RationalSpectrum rspec;
  ApproxController ac;
  Norms norms;
};

RaRun rational(const SynthesisContext& ctx, const FixedPointResult& r, int m) {
  RaRun out;
  out.rspec = min_epsilon(GridSpectrum::scalar(ctx.grid, r.state.Nspec), m);
  out.ac = approx_controller(ctx, out.rspec);
  out.norms = norms_of(ctx, out.ac.K, &out.ac.realization);
  return out;
}

struct GammaJob {
  FixedPointResult fp;
  Norms norms;
  std::vector<RaRun> ra;
};

std::string trace_name(double g) { return "trace_g" + g6(g) + ".jsonl"; }

}  // namespace

void cmd_norms(const RunConfig& cfg, std::ostream& log) {
  Session s(cfg, log);
  const auto orders = orders_or_default(cfg);
  const double ginf = s.gamma_inf();
  const double gproxy = ginf * (1.0 + 1e-3);
  const Norms n2 = norms_of(s.ctx, h2_controller(s.ctx.stat, s.ctx.ric), &s.k2);
  const Norms np = norms_of(s.ctx, mixed(s.ctx, gproxy, nullptr).K);

  const auto jobs = parallel_map<GammaJob>(cfg.gammas.size(), cfg.jobs, [&](std::size_t i) {
    GammaJob j;
    j.fp = mixed(s.ctx, cfg.gammas[i], nullptr);
    j.norms = norms_of(s.ctx, j.fp.K);
    for (int m : orders) j.ra.push_back(rational(s.ctx, j.fp, m));
    return j;
  });

  std::ostringstream csv, txt;
  csv << "controller,gamma,order,h2,hinf,eps\n";
  txt << std::left << std::setw(12) << "controller" << std::setw(12) << "gamma" << std::setw(8) << "order"
      << std::setw(14) << "||T||_HS" << std::setw(14) << "||T||_inf" << "eps\n";
  auto row = [&](const std::string& name, double g, const std::string& order, const Norms& n, const std::string& eps) {
    csv << name << ',' << g6(g) << ',' << order << ',' << g6(n.h2) << ',' << g6(n.hinf) << ',' << eps << '\n';
    txt << std::left << std::setw(12) << name << std::setw(12) << g6(g) << std::setw(8) << order << std::setw(14)
        << g6(n.h2) << std::setw(14) << g6(n.hinf) << eps << '\n';
  };
  row("hinf_proxy", gproxy, "", np, "");
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    row("mixed", cfg.gammas[i], "", jobs[i].norms, "");
    for (std::size_t k = 0; k < orders.size(); ++k)
      row("ra", cfg.gammas[i], std::to_string(orders[k]), jobs[i].ra[k].norms, g6(jobs[i].ra[k].rspec.achieved_eps));
  }
  row("h2", s.gamma2, "", n2, "");
  write_file_atomic(out_path(cfg, "norms.csv"), csv.str());
  write_file_atomic(out_path(cfg, "norms.txt"), txt.str());
  log << "system " << s.ctx.sys.name << ": gamma_inf ~ " << g6(ginf) << ", gamma_2 = " << g6(s.gamma2) << '\n'
      << txt.str();
}

void cmd_spectrum(const RunConfig& cfg, std::ostream& log) {
  Session s(cfg, log);
  const auto orders = cfg.ra_orders;
  const double gproxy = s.gamma_inf() * (1.0 + 1e-3);
  std::vector<std::string> names{"h2", "hinf_proxy"};
  std::vector<Vector> cols;
  auto sigma2 = [&](const GridSpectrum& K) { return sigma_max_squared(closed_loop(s.ctx.plant.F, s.ctx.plant.G, K)); };
  cols.push_back(sigma2(h2_controller(s.ctx.stat, s.ctx.ric)));
  cols.push_back(sigma2(mixed(s.ctx, gproxy, nullptr).K));
  const auto jobs = parallel_map<std::vector<Vector>>(cfg.gammas.size(), cfg.jobs, [&](std::size_t i) {
    std::vector<Vector> v;
    const FixedPointResult fp = mixed(s.ctx, cfg.gammas[i], nullptr);
    v.push_back(sigma2(fp.K));
    for (int m : orders) v.push_back(sigma2(rational(s.ctx, fp, m).ac.K));
    return v;
  });
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    names.push_back("mixed_" + g6(cfg.gammas[i]));
    for (int m : orders) names.push_back("ra" + std::to_string(m) + "_" + g6(cfg.gammas[i]));
    for (const auto& v : jobs[i]) cols.push_back(v);
  }
  std::ostringstream csv;
  csv << "omega";
  for (const auto& n : names) csv << ',' << n;
  csv << '\n';
  for (std::size_t k = 0; k < s.ctx.grid.size(); ++k) {
    csv << g6(s.ctx.grid.omega(k));
    for (const auto& c : cols) csv << ',' << g6(c[static_cast<Eigen::Index>(k)]);
    csv << '\n';
  }
  write_file_atomic(out_path(cfg, "spectrum.csv"), csv.str());
  log << "wrote " << cols.size() << " curves on " << s.ctx.grid.size() << " frequencies\n";
}

void cmd_contraction(const RunConfig& cfg, std::ostream& log) {
  Session s(cfg, log);
  std::vector<double> gammas = cfg.gammas;
  if (gammas.empty()) {
    const double ginf = s.gamma_inf();
    for (double f : {0.1, 0.3, 0.5, 0.7, 0.9}) gammas.push_back(ginf + f * (s.gamma2 - ginf));
  }
  std::vector<std::uint64_t> seeds(20);
  for (std::size_t i = 0; i < seeds.size(); ++i) seeds[i] = cfg.seed + i;
  const auto ratios = parallel_map<std::vector<double>>(
      gammas.size(), cfg.jobs, [&](std::size_t i) { return contraction_ratio(s.ctx, gammas[i], seeds); });
  std::ostringstream csv;
  csv << "gamma,seed,ratio\n";
  for (std::size_t i = 0; i < gammas.size(); ++i) {
    for (std::size_t k = 0; k < seeds.size(); ++k) csv << g6(gammas[i]) << ',' << seeds[k] << ',' << g6(ratios[i][k]) << '\n';
    std::vector<double> r = ratios[i];
    std::sort(r.begin(), r.end());
    log << "gamma " << g6(gammas[i]) << ": max ratio " << g6(r.back()) << ", median "
        << g6(0.5 * (r[(r.size() - 1) / 2] + r[r.size() / 2])) << '\n';
  }
  write_file_atomic(out_path(cfg, "contraction.csv"), csv.str());
}

void cmd_approx(const RunConfig& cfg, std::ostream& log) {
  require_gammas(cfg);
  Session s(cfg, log);
  const auto orders = orders_or_default(cfg);
  const auto jobs = parallel_map<GammaJob>(cfg.gammas.size(), cfg.jobs, [&](std::size_t i) {
    GammaJob j;
    j.fp = mixed(s.ctx, cfg.gammas[i], nullptr);
    j.norms = norms_of(s.ctx, j.fp.K);
    for (int m : orders) j.ra.push_back(rational(s.ctx, j.fp, m));
    return j;
  });
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    for (std::size_t k = 0; k < orders.size(); ++k) {
      const RaRun& r = jobs[i].ra[k];
      json j = json::parse(approx_to_json(r.rspec, r.ac));
      j["system"] = s.ctx.sys.name;
      j["gamma"] = cfg.gammas[i];
      j["h2"] = r.norms.h2;
      j["hinf"] = r.norms.hinf;
      j["order"] = r.ac.realization.order();
      const std::string name = "approx_g" + g6(cfg.gammas[i]) + "_m" + std::to_string(orders[k]) + ".json";
      write_file_atomic(out_path(cfg, name), j.dump(2) + "\n");
      log << "gamma " << g6(cfg.gammas[i]) << " m " << orders[k] << ": eps " << g6(r.rspec.achieved_eps) << ", norms ("
          << g6(r.norms.h2) << ", " << g6(r.norms.hinf) << "), mixed (" << g6(jobs[i].norms.h2) << ", "
          << g6(jobs[i].norms.hinf) << ")\n";
    }
  }
}

void cmd_synth(const RunConfig& cfg, std::ostream& log) {
  require_gammas(cfg);
  Session s(cfg, log);
  struct Out {
    FixedPointResult fp;
    Norms norms;
    double kkt = 0.0;
    std::string trace;
  };
  const auto outs = parallel_map<Out>(cfg.gammas.size(), cfg.jobs, [&](std::size_t i) {
    Out o;
    std::ostringstream tr;
    o.fp = mixed(s.ctx, cfg.gammas[i], cfg.trace ? &tr : nullptr);
    o.norms = norms_of(s.ctx, o.fp.K);
    o.kkt = kkt_residual(o.fp.state, s.ctx, cfg.gammas[i]);
    o.trace = tr.str();
    return o;
  });
  for (std::size_t i = 0; i < outs.size(); ++i) {
    const Out& o = outs[i];
    const double g = cfg.gammas[i];
    json j;
    j["system"] = s.ctx.sys.name;
    j["gamma"] = g;
    j["gamma_2"] = s.gamma2;
    j["status"] = to_string(o.fp.status);
    j["iterations"] = o.fp.state.iter;
    j["residual"] = o.fp.state.residual;
    j["kkt_residual"] = o.kkt;
    j["bbar"] = std::vector<double>(o.fp.state.bbar.value.data(),
                                    o.fp.state.bbar.value.data() + o.fp.state.bbar.value.size());
    j["h2"] = o.norms.h2;
    j["hinf"] = o.norms.hinf;
    j["max_N"] = o.fp.state.Nspec.maxCoeff();
    write_file_atomic(out_path(cfg, "synth_g" + g6(g) + ".json"), j.dump(2) + "\n");
    std::ostringstream ks;
    write_spectrum_csv(ks, o.fp.K);
    write_file_atomic(out_path(cfg, "K_g" + g6(g) + ".csv"), ks.str());
    if (cfg.trace) write_file_atomic(out_path(cfg, trace_name(g)), o.trace);
    log << "gamma " << g6(g) << ": " << to_string(o.fp.status) << " in " << o.fp.state.iter << " iterations, norms ("
        << g6(o.norms.h2) << ", " << g6(o.norms.hinf) << "), kkt " << g6(o.kkt) << '\n';
  }
}

int run_command(const std::string& name, const RunConfig& cfg, std::ostream& log, std::ostream& err) {
  auto record = [&](const std::string& code, const std::string& msg) {
    json j;
    j["command"] = name;
    j["error"] = code;
    j["message"] = msg;
    err << j.dump() << '\n';
    try {
      fs::create_directories(cfg.output_dir);
      write_file_atomic(fs::path(cfg.output_dir) / "error.json", j.dump(2) + "\n");
    } catch (...) {
    }
  };
  try {
    if (cfg.grid_N == 0 || (cfg.grid_N & (cfg.grid_N - 1)) != 0)
      throw Error(ErrorCode::kInvalidArgument, "--grid must be a power of two");
    if (name == "norms") cmd_norms(cfg, log);
    else if (name == "spectrum") cmd_spectrum(cfg, log);
    else if (name == "contraction") cmd_contraction(cfg, log);
    else if (name == "approx") cmd_approx(cfg, log);
    else if (name == "synth") cmd_synth(cfg, log);
    else throw Error(ErrorCode::kInvalidArgument, "unknown command " + name);
    return 0;
  } catch (const Error& e) {
    record(std::string(to_string(e.code())), e.what());
    return 1;
  } catch (const std::exception& e) {
    record("Internal", e.what());
    return 1;
  }
}

}  // namespace mixedh2::cli
