#pragma once

#include <optional>
#include <string>

#include "mixedh2/lti.hpp"

namespace mixedh2::cli {

struct ResolvedSystem {
  StateSpaceSystem sys;
  std::string bw_source;  // "file", "builtin" or "default_bu"
};

// AC17 with the given disturbance input, or Bw = Bu when none is supplied.
ResolvedSystem ac17(const std::optional<Matrix>& Bw);
// x+ = 0.5 x + u + w.
StateSpaceSystem scalar_demo();

// `spec` is a builtin name (AC17, scalar) or a path to a plant JSON file.
// `bw_file` overrides Bw with the "Bw" entry of a JSON file.
ResolvedSystem resolve_system(const std::string& spec, const std::optional<std::string>& bw_file);

}  // namespace mixedh2::cli
