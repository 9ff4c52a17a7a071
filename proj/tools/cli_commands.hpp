#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace mixedh2::cli {

struct RunConfig {
  std::string system = "AC17";
  std::optional<std::string> bw_file;
  std::vector<double> gammas;
  std::size_t grid_N = 1024;
  std::vector<int> ra_orders;
  std::string output_dir = ".";
  std::uint64_t seed = 0;
  bool trace = false;
  int jobs = 1;  // concurrent per-gamma jobs
};

// Each command writes its files into cfg.output_dir and a short summary to
// `log`. Library failures propagate as mixedh2::Error.
void cmd_norms(const RunConfig& cfg, std::ostream& log);
void cmd_spectrum(const RunConfig& cfg, std::ostream& log);
void cmd_contraction(const RunConfig& cfg, std::ostream& log);
void cmd_approx(const RunConfig& cfg, std::ostream& log);
void cmd_synth(const RunConfig& cfg, std::ostream& log);

// Dispatches by name and converts any exception into a JSON error record on
// `err` (and error.json in the output directory). Returns the exit code.
int run_command(const std::string& name, const RunConfig& cfg, std::ostream& log, std::ostream& err);

}  // namespace mixedh2::cli
