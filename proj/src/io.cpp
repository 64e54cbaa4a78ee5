#include "nilfrac/io.hpp"

#include <bit>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

#include "nilfrac/errors.hpp"

namespace nilfrac {

static_assert(std::endian::native == std::endian::little,
              "GF1 payload is written as native little-endian doubles");

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string encode_gf1(const GridFunction& f) {
  const auto& s = f.spec;
  std::string out = "GF1 " + std::to_string(s.dims) + " " + std::to_string(s.n) + " " +
                    format_double(s.L) + " " + std::string(to_string(s.mode)) + "\n";
  const std::size_t header = out.size();
  const std::size_t bytes = static_cast<std::size_t>(f.values.size()) * sizeof(double);
  out.resize(header + bytes);
  std::memcpy(out.data() + header, f.values.data(), bytes);
  return out;
}

GridFunction decode_gf1(std::string_view bytes) {
  const auto eol = bytes.find('\n');
  if (eol == std::string_view::npos) {
    throw ConfigError("GF1: missing header line");
  }
  std::istringstream header{std::string(bytes.substr(0, eol))};
  std::string magic, mode;
  GridSpec spec;
  if (!(header >> magic >> spec.dims >> spec.n >> spec.L >> mode) || magic != "GF1") {
    throw ConfigError("GF1: malformed header");
  }
  spec.mode = parse_grid_mode(mode);
  spec.validate();
  const auto payload = bytes.substr(eol + 1);
  const std::size_t expected = static_cast<std::size_t>(spec.node_count()) * sizeof(double);
  if (payload.size() != expected) {
    throw ShapeError("GF1: payload has " + std::to_string(payload.size()) + " bytes, expected " +
                     std::to_string(expected));
  }
  GridFunction f(spec);
  std::memcpy(f.values.data(), payload.data(), expected);
  return f;
}

void write_file_atomic(const std::filesystem::path& path, std::string_view contents) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    if (!os) throw ConfigError("cannot open " + tmp.string() + " for writing");
    os.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    if (!os) throw ConfigError("write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw ConfigError("cannot open " + path.string());
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

void write_gf1(const std::filesystem::path& path, const GridFunction& f) {
  write_file_atomic(path, encode_gf1(f));
}

GridFunction read_gf1(const std::filesystem::path& path) {
  return decode_gf1(read_file(path));
}

}  // namespace nilfrac
