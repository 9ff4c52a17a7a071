#pragma once

#include <functional>
#include <string>

namespace mixedh2 {

using WarningSink = std::function<void(const std::string&)>;

// Installs a process-wide sink for non-fatal numerical warnings. The default
// sink writes to stderr. Passing an empty function silences warnings. Returns
// the previous sink.
WarningSink set_warning_sink(WarningSink sink);
void warn(const std::string& message);

}  // namespace mixedh2
