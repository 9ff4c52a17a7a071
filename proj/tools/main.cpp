#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "cli_commands.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Mixed H2/H-infinity full-information controller synthesis"};
  app.require_subcommand(1);
  mixedh2::cli::RunConfig cfg;

  const std::pair<const char*, const char*> commands[] = {
      {"norms", "H2 / H-infinity norm table for the H2, mixed, approximate and H-infinity proxy controllers"},
      {"spectrum", "Per-frequency largest singular value of T*T for each controller"},
      {"contraction", "One-sweep contraction ratios over seeded random initial spectra"},
      {"approx", "Rational approximations and state-space realizations"},
      {"synth", "Mixed controller synthesis with optional iteration traces"},
  };
  for (const auto& [name, help] : commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("--system", cfg.system, "Builtin (AC17, scalar) or plant JSON path")->capture_default_str();
    sub->add_option("--bw", cfg.bw_file, "JSON file whose \"Bw\" entry replaces the disturbance input");
    sub->add_option("--gamma", cfg.gammas, "H-infinity level (repeatable)")->take_all()->allow_extra_args(false);
    sub->add_option("--grid", cfg.grid_N, "Frequency grid size (power of two)")->capture_default_str();
    sub->add_option("--ra-order", cfg.ra_orders, "Rational approximation order (repeatable)")->allow_extra_args(false);
    sub->add_option("--seed", cfg.seed, "Base random seed")->capture_default_str();
    sub->add_option("--out", cfg.output_dir, "Output directory")->capture_default_str();
    sub->add_flag("--trace", cfg.trace, "Write per-iteration JSON-lines traces");
    sub->add_option("--jobs", cfg.jobs, "Concurrent per-gamma jobs")->capture_default_str();
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    nlohmann::json rec{{"command", "parse"}, {"error", "InvalidArgument"}, {"message", e.what()}};
    std::cerr << rec.dump() << '\n';
    return 2;
  }
  const std::string name = app.get_subcommands().front()->get_name();
  return mixedh2::cli::run_command(name, cfg, std::cout, std::cerr);
}
