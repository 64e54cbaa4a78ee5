#pragma once

#include <cstdint>
#include <filesystem>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "nilfrac/grid.hpp"
#include "nilfrac/stencil.hpp"

namespace nilfrac {

enum class Command { kAssemble, kSpectrum, kFrac, kHeat, kExtend, kLimit, kVerifyAll };

std::string_view to_string(Command c);
/// Throws ConfigError on an unknown name.
Command parse_command(std::string_view text);

/// Everything a run depends on. Serialized as flat "key = value" lines.
struct ExperimentConfig {
  Command command = Command::kVerifyAll;
  GridMode mode = GridMode::kHeisenberg;
  int dims = 3;
  int n = 15;
  double L = 4.0;
  OperatorKind op = OperatorKind::kJ1;
  std::vector<double> s = {0.5};
  std::vector<double> t;  // empty: the command's default sweep
  int quad_nodes = 400;
  double tol = 1e-10;
  std::uint64_t seed = 1;
  double phi_width = 0.0;  // 0: automatic
  int dense_limit = 6000;
  std::filesystem::path out = "nilfrac_out";

  /// Keys: command mode dims n L op s t quad_nodes tol seed phi_width dense_limit out.
  /// Lists (s, t) are comma separated. Throws ConfigError naming the key.
  void set(std::string_view key, std::string_view value);

  /// Cross-field checks (grid validity, operator vs mode, 0 < s < 1, t > 0).
  void validate() const;

  /// Sorted key = value lines, doubles with 17 significant digits. `out` is
  /// left out so that moving the output directory keeps the hash.
  std::string canonical() const;

  /// FNV-1a 64 of canonical(), 16 hex digits.
  std::string hash() const;

  /// t values actually used by the command.
  std::vector<double> t_or_default() const;
};

/// Parses a flat config file body: "key = value" per line, '#' comments,
/// blank lines ignored. Throws ConfigError on a malformed line or unknown key,
/// and when the text holds no keys at all.
ExperimentConfig parse_config_text(std::string_view text, ExperimentConfig base = {});

struct Check {
  std::string name;
  double target = 0.0;
  double achieved = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

struct PhaseTime {
  std::string phase;
  double seconds = 0.0;
};

struct RunReport {
  std::string command;
  std::string config_hash;
  std::string config;  // canonical text
  std::vector<Check> checks;
  std::vector<std::string> artifacts;  // relative to the output directory
  std::vector<std::string> warnings;
  std::vector<PhaseTime> timing;  // not covered by the hash, excluded from determinism

  bool passed() const;
};

/// Runs one experiment and writes results.json plus the command's CSV, GF1
/// and MatrixMarket files into config.out. Deterministic given the config.
RunReport run(const ExperimentConfig& config);

/// Fixed-width table, one line per check; failing lines start with "FAIL".
std::string render_table(const RunReport& report);

/// Machine-readable report. `with_timing = false` drops the timing field.
std::string render_json(const RunReport& report, bool with_timing = true);
RunReport parse_report_json(std::string_view text);

/// One "name,target,achieved,tolerance,pass" row per check.
void write_checks_csv(std::ostream& os, const RunReport& report);

}  // namespace nilfrac
