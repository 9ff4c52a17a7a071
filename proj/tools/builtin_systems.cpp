#include "builtin_systems.hpp"

#include "mixedh2/errors.hpp"
#include "mixedh2/io.hpp"

namespace mixedh2::cli {

ResolvedSystem ac17(const std::optional<Matrix>& Bw) {
  Matrix A(4, 4);
  A << -2.98, 0.93, 0.0, -0.034,
       -0.99, -0.21, 0.035, -0.001,
       0.0, 0.0, 0.0, 1.0,
       0.39, -5.55, 0.0, -1.89;
  Matrix Bu(4, 1);
  Bu << -0.032, 0.0, 0.0, -1.6;
  if (Bw) return {make_system("AC17", A, Bu, *Bw), "file"};
  return {make_system("AC17", A, Bu, Bu), "default_bu"};
}

StateSpaceSystem scalar_demo() {
  return make_system("scalar", Matrix::Constant(1, 1, 0.5), Matrix::Ones(1, 1), Matrix::Ones(1, 1));
}

ResolvedSystem resolve_system(const std::string& spec, const std::optional<std::string>& bw_file) {
  std::optional<Matrix> Bw;
  if (bw_file) Bw = load_matrix(*bw_file, "Bw");
  if (spec == "AC17" || spec == "ac17") return ac17(Bw);
  ResolvedSystem r;
  if (spec == "scalar") {
    r = {scalar_demo(), "builtin"};
  } else {
    r = {load_plant(spec), "file"};
  }
  if (Bw) {
    r.sys = make_system(r.sys.name, r.sys.A, r.sys.Bu, *Bw);
    r.bw_source = "file";
  }
  return r;
}

}  // namespace mixedh2::cli
