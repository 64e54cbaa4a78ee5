#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "nilfrac/grid.hpp"

namespace nilfrac {

// GF1 grid-function format:
//   "GF1 <dims> <n_per_axis> <L> <mode>\n" followed by N little-endian
//   float64 values in flat (x3-fastest) order. L is written with 17
//   significant digits so the spec round-trips exactly.

std::string encode_gf1(const GridFunction& f);
GridFunction decode_gf1(std::string_view bytes);

void write_gf1(const std::filesystem::path& path, const GridFunction& f);
GridFunction read_gf1(const std::filesystem::path& path);

/// Writes to a sibling temp file, then renames over `path`.
void write_file_atomic(const std::filesystem::path& path, std::string_view contents);

std::string read_file(const std::filesystem::path& path);

/// printf("%.17g") as a string.
std::string format_double(double v);

}  // namespace nilfrac
