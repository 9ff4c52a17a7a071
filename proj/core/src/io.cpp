#include "mixedh2/io.hpp"

#include <fstream>
#include <iomanip>
#include <optional>
#include <sstream>

#include <json.hpp>

#include "mixedh2/errors.hpp"

namespace mixedh2 {

namespace {

using nlohmann::json;

Matrix to_matrix(const json& j, const std::string& key) {
  if (!j.is_array() || j.empty()) throw Error(ErrorCode::kInvalidArgument, key + ": expected non-empty array");
  // A flat array is read as a column vector.
  if (!j.front().is_array()) {
    Matrix M(static_cast<Eigen::Index>(j.size()), 1);
    for (std::size_t i = 0; i < j.size(); ++i) M(static_cast<Eigen::Index>(i), 0) = j[i].get<double>();
    return M;
  }
  const std::size_t rows = j.size(), cols = j.front().size();
  Matrix M(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (std::size_t i = 0; i < rows; ++i) {
    if (!j[i].is_array() || j[i].size() != cols) throw Error(ErrorCode::kInvalidArgument, key + ": ragged rows");
    for (std::size_t c = 0; c < cols; ++c)
      M(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c)) = j[i][c].get<double>();
  }
  return M;
}

json from_matrix(const Matrix& M) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < M.rows(); ++i) {
    json r = json::array();
    for (Eigen::Index c = 0; c < M.cols(); ++c) r.push_back(M(i, c));
    rows.push_back(r);
  }
  return rows;
}

json parse_json(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kIo, std::string("invalid JSON: ") + e.what());
  }
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

StateSpaceSystem parse_plant(const std::string& json_text) {
  json j = parse_json(json_text);
  try {
    for (const char* key : {"A", "Bu", "Bw"})
      if (!j.contains(key)) throw Error(ErrorCode::kInvalidArgument, std::string("plant is missing ") + key);
    std::optional<Matrix> Q, R;
    if (j.contains("Q")) Q = to_matrix(j["Q"], "Q");
    if (j.contains("R")) R = to_matrix(j["R"], "R");
    return make_system(j.value("name", std::string("plant")), to_matrix(j["A"], "A"), to_matrix(j["Bu"], "Bu"),
                       to_matrix(j["Bw"], "Bw"), Q, R);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kInvalidArgument, std::string("malformed plant: ") + e.what());
  }
}

StateSpaceSystem load_plant(const std::filesystem::path& path) { return parse_plant(read_file(path)); }

std::string plant_to_json(const StateSpaceSystem& sys) {
  json j;
  j["name"] = sys.name;
  j["A"] = from_matrix(sys.A);
  j["Bu"] = from_matrix(sys.Bu);
  j["Bw"] = from_matrix(sys.Bw);
  return j.dump(2);
}

Matrix load_matrix(const std::filesystem::path& path, const std::string& key) {
  json j = parse_json(read_file(path));
  if (!j.contains(key)) throw Error(ErrorCode::kInvalidArgument, path.string() + " has no key " + key);
  try {
    return to_matrix(j[key], key);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kInvalidArgument, e.what());
  }
}

void write_spectrum_csv(std::ostream& os, const GridSpectrum& s) {
  os << "omega";
  for (int i = 1; i <= s.rows; ++i)
    for (int c = 1; c <= s.cols; ++c) os << ",re_" << i << c << ",im_" << i << c;
  os << '\n';
  os << std::setprecision(6);
  for (std::size_t k = 0; k < s.size(); ++k) {
    os << s.grid.omega(k);
    for (int i = 0; i < s.rows; ++i)
      for (int c = 0; c < s.cols; ++c) os << ',' << s.values[k](i, c).real() << ',' << s.values[k](i, c).imag();
    os << '\n';
  }
}

void write_file_atomic(const std::filesystem::path& path, const std::string& contents) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::kIo, "cannot write " + tmp.string());
    out << contents;
    if (!out) throw Error(ErrorCode::kIo, "write failed for " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw Error(ErrorCode::kIo, "rename to " + path.string() + " failed: " + ec.message());
}

}  // namespace mixedh2
