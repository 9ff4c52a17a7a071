#include "fft.hpp"

#include <cstdio>
#include <mutex>
#include <utility>
#include <unsupported/Eigen/FFT>

#include "mixedh2/log.hpp"

namespace mixedh2 {

namespace {
std::mutex g_sink_mutex;
WarningSink& sink_ref() {
  static WarningSink sink = [](const std::string& m) { std::fprintf(stderr, "warning: %s\n", m.c_str()); };
  return sink;
}
}  // namespace

WarningSink set_warning_sink(WarningSink sink) {
  std::lock_guard<std::mutex> lock(g_sink_mutex);
  std::swap(sink_ref(), sink);
  return sink;
}

void warn(const std::string& message) {
  std::lock_guard<std::mutex> lock(g_sink_mutex);
  if (sink_ref()) sink_ref()(message);
}

namespace detail {

// Eigen's fwd computes sum_t x_t e^{-j 2 pi k t / N}; inv includes the 1/N.
cvec coefficients(const cvec& x) {
  Eigen::FFT<double> fft;
  cvec c;
  fft.inv(c, x);
  return c;
}

cvec samples(const cvec& c) {
  Eigen::FFT<double> fft;
  cvec x;
  fft.fwd(x, c);
  return x;
}

}  // namespace detail
}  // namespace mixedh2
