#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <string>

#include "nilfrac/blas_env.hpp"
#include "nilfrac/errors.hpp"
#include "nilfrac/experiment.hpp"
#include "nilfrac/io.hpp"

namespace {

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;

// Flag name -> config key.
const std::map<std::string, std::string> kFlags = {
    {"mode", "mode"}, {"op", "op"},   {"dims", "dims"},           {"n", "n"},
    {"L", "L"},       {"s", "s"},     {"t", "t"},                 {"quad-nodes", "quad_nodes"},
    {"tol", "tol"},   {"seed", "seed"}, {"phi-width", "phi_width"}, {"out", "out"}};

}  // namespace

int main(int argc, char** argv) {
  nilfrac::pin_openblas_core(argc, argv);

  CLI::App app{"Fractional powers and the extension problem for sub-Laplacians on the Heisenberg group"};
  app.require_subcommand(1);
  std::string config_path;
  bool json = false;
  std::map<std::string, std::optional<std::string>> values;
  for (const auto& [flag, key] : kFlags) values[flag];

  const char* commands[][2] = {
      {"assemble", "Assemble the operator and export it (MatrixMarket)"},
      {"spectrum", "Dense eigendecomposition and spectrum checks"},
      {"frac", "Fractional powers J^s phi"},
      {"heat", "Heat kernel columns and semigroup checks"},
      {"extend", "Solve the extension problem on a t sweep"},
      {"limit", "Boundary limit t^(1-2s) u_t -> -C(s) J^s phi"},
      {"verify-all", "Every check above plus the kernel estimates"}};
  for (const auto& [name, help] : commands) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("--config", config_path, "Flat key = value config file");
    sub->add_option("--mode", values["mode"], "heisenberg | euclidean_box | euclidean_torus");
    sub->add_option("--op", values["op"], "j1 | j3 | euclid");
    sub->add_option("--dims", values["dims"], "Euclidean dimension (1-3)");
    sub->add_option("--n", values["n"], "Nodes per axis");
    sub->add_option("--L", values["L"], "Half-width of the box [-L, L]^d");
    sub->add_option("--s", values["s"], "Comma-separated fractional orders in (0, 1)");
    sub->add_option("--t", values["t"], "Comma-separated extension / heat times");
    sub->add_option("--quad-nodes", values["quad-nodes"], "Initial trapezoid nodes");
    sub->add_option("--tol", values["tol"], "Quadrature tolerance (relative)");
    sub->add_option("--seed", values["seed"], "Seed for the random test function");
    sub->add_option("--phi-width", values["phi-width"], "Width of the torus test bump (0: auto)");
    sub->add_option("--out", values["out"], "Output directory");
    sub->add_flag("--json", json, "Print results.json instead of the table");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  nilfrac::ExperimentConfig config;
  try {
    if (!config_path.empty()) {
      config = nilfrac::parse_config_text(nilfrac::read_file(config_path));
    }
    config.command = nilfrac::parse_command(app.get_subcommands().front()->get_name());
    for (const auto& [flag, value] : values) {
      if (value) config.set(kFlags.at(flag), *value);
    }
    config.validate();
  } catch (const nilfrac::Error& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    const auto report = nilfrac::run(config);
    if (json) {
      std::cout << nilfrac::render_json(report);
    } else {
      std::cout << nilfrac::render_table(report);
      std::cout << "results: " << (config.out / "results.json").string() << "\n";
    }
    return report.passed() ? kExitPass : kExitFail;
  } catch (const nilfrac::ConfigError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cout << "FAIL  " << e.what() << "\n";
    return kExitFail;
  }
}
