#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "mixedh2/lti.hpp"

namespace mixedh2 {

// Plant documents: {name, A, Bu, Bw, Q?, R?}, row-major nested arrays.
StateSpaceSystem parse_plant(const std::string& json_text);
StateSpaceSystem load_plant(const std::filesystem::path& path);
std::string plant_to_json(const StateSpaceSystem& sys);

// Reads a dense matrix stored under `key` in a JSON file.
Matrix load_matrix(const std::filesystem::path& path, const std::string& key);

// CSV with columns omega, re_ij, im_ij (1-based i, j).
void write_spectrum_csv(std::ostream& os, const GridSpectrum& s);

// Writes to a temporary sibling then renames over `path`.
void write_file_atomic(const std::filesystem::path& path, const std::string& contents);

}  // namespace mixedh2
