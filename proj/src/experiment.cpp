#include "nilfrac/experiment.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <memory>
#include <numbers>
#include <optional>
#include <random>
#include <sstream>

#include <nlohmann/json.hpp>

#include "nilfrac/errors.hpp"
#include "nilfrac/estimates.hpp"
#include "nilfrac/extension.hpp"
#include "nilfrac/fields.hpp"
#include "nilfrac/fourier.hpp"
#include "nilfrac/group.hpp"
#include "nilfrac/io.hpp"
#include "nilfrac/spectral.hpp"

namespace nilfrac {

namespace {

constexpr std::pair<Command, std::string_view> kCommandNames[] = {
    {Command::kAssemble, "assemble"}, {Command::kSpectrum, "spectrum"},
    {Command::kFrac, "frac"},         {Command::kHeat, "heat"},
    {Command::kExtend, "extend"},     {Command::kLimit, "limit"},
    {Command::kVerifyAll, "verify-all"}};

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

double parse_real(std::string_view key, std::string_view text) {
  const std::string t = trim(text);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (t.empty() || ec != std::errc() || ptr != t.data() + t.size() || !std::isfinite(v)) {
    throw ConfigError("config key '" + std::string(key) + "': '" + t + "' is not a number");
  }
  return v;
}

long long parse_integer(std::string_view key, std::string_view text) {
  const std::string t = trim(text);
  long long v = 0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (t.empty() || ec != std::errc() || ptr != t.data() + t.size()) {
    throw ConfigError("config key '" + std::string(key) + "': '" + t + "' is not an integer");
  }
  return v;
}

std::vector<double> parse_list(std::string_view key, std::string_view text) {
  std::vector<double> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto comma = text.find(',', start);
    const auto piece = text.substr(start, comma == std::string_view::npos ? text.npos : comma - start);
    out.push_back(parse_real(key, piece));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

std::string join(const std::vector<double>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ',';
    out += format_double(v[i]);
  }
  return out;
}

std::uint64_t fnv1a(std::string_view text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace

std::string_view to_string(Command c) {
  for (const auto& [cmd, name] : kCommandNames) {
    if (cmd == c) return name;
  }
  return "unknown";
}

Command parse_command(std::string_view text) {
  for (const auto& [cmd, name] : kCommandNames) {
    if (name == text) return cmd;
  }
  throw ConfigError("unknown command '" + std::string(text) +
                    "' (expected assemble, spectrum, frac, heat, extend, limit or verify-all)");
}

void ExperimentConfig::set(std::string_view key, std::string_view value) {
  const std::string v = trim(value);
  if (key == "command") {
    command = parse_command(v);
  } else if (key == "mode") {
    mode = parse_grid_mode(v);
    if (mode == GridMode::kHeisenberg) dims = 3;
  } else if (key == "dims") {
    dims = static_cast<int>(parse_integer(key, v));
  } else if (key == "n") {
    n = static_cast<int>(parse_integer(key, v));
  } else if (key == "L") {
    L = parse_real(key, v);
  } else if (key == "op") {
    op = parse_operator_kind(v);
  } else if (key == "s") {
    s = parse_list(key, v);
  } else if (key == "t") {
    t = parse_list(key, v);
  } else if (key == "quad_nodes") {
    quad_nodes = static_cast<int>(parse_integer(key, v));
  } else if (key == "tol") {
    tol = parse_real(key, v);
  } else if (key == "seed") {
    const long long seed_value = parse_integer(key, v);
    if (seed_value < 0) throw ConfigError("config key 'seed' must be >= 0");
    seed = static_cast<std::uint64_t>(seed_value);
  } else if (key == "phi_width") {
    phi_width = parse_real(key, v);
  } else if (key == "dense_limit") {
    dense_limit = static_cast<int>(parse_integer(key, v));
  } else if (key == "out") {
    if (v.empty()) throw ConfigError("config key 'out' is empty");
    out = v;
  } else {
    throw ConfigError("unknown config key '" + std::string(key) + "'");
  }
}

void ExperimentConfig::validate() const {
  GridSpec{dims, n, L, mode}.validate();
  if (mode == GridMode::kHeisenberg && op == OperatorKind::kEuclid) {
    throw ConfigError("config key 'op': euclid needs a euclidean mode");
  }
  if (mode != GridMode::kHeisenberg && op != OperatorKind::kEuclid) {
    throw ConfigError("config key 'op': " + std::string(to_string(op)) + " needs mode heisenberg");
  }
  if (s.empty()) throw ConfigError("config key 's' is empty");
  for (double v : s) {
    if (!(v > 0.0 && v < 1.0)) throw ConfigError("config key 's': every s must lie in (0, 1)");
  }
  for (double v : t) {
    if (!(v > 0.0)) throw ConfigError("config key 't': every t must be > 0");
  }
  if (command == Command::kLimit && !t.empty()) {
    if (t.size() < 3) throw ConfigError("config key 't': limit needs at least three values");
    for (std::size_t i = 1; i < t.size(); ++i) {
      if (!(t[i] < t[i - 1])) throw ConfigError("config key 't': limit needs descending values");
    }
  }
  if (quad_nodes < 8) throw ConfigError("config key 'quad_nodes' must be >= 8");
  if (!(tol > 0.0 && tol < 1e-2)) throw ConfigError("config key 'tol' must lie in (0, 1e-2)");
  if (phi_width < 0.0) throw ConfigError("config key 'phi_width' must be >= 0");
  if (dense_limit < 1) throw ConfigError("config key 'dense_limit' must be >= 1");
}

std::string ExperimentConfig::canonical() const {
  std::map<std::string, std::string> kv;
  kv["command"] = std::string(to_string(command));
  kv["mode"] = std::string(to_string(mode));
  kv["dims"] = std::to_string(dims);
  kv["n"] = std::to_string(n);
  kv["L"] = format_double(L);
  kv["op"] = std::string(to_string(op));
  kv["s"] = join(s);
  kv["t"] = join(t_or_default());
  kv["quad_nodes"] = std::to_string(quad_nodes);
  kv["tol"] = format_double(tol);
  kv["seed"] = std::to_string(seed);
  kv["phi_width"] = format_double(phi_width);
  kv["dense_limit"] = std::to_string(dense_limit);
  std::string out_text;
  for (const auto& [k, v] : kv) out_text += k + " = " + v + "\n";
  return out_text;
}

std::string ExperimentConfig::hash() const {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a(canonical())));
  return buf;
}

std::vector<double> ExperimentConfig::t_or_default() const {
  if (!t.empty()) return t;
  switch (command) {
    case Command::kHeat:
      return {0.1, 0.2, 0.4};
    case Command::kExtend:
      return {0.1, 0.5, 1.0};
    case Command::kLimit:
    case Command::kVerifyAll:
      return {0.1, 0.05, 0.025};
    default:
      return {};
  }
}

ExperimentConfig parse_config_text(std::string_view text, ExperimentConfig base) {
  int keys = 0;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    auto end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string line(text.substr(pos, end - pos));
    pos = end + 1;
    ++line_no;
    if (const auto hash_pos = line.find('#'); hash_pos != std::string::npos) line.resize(hash_pos);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config line " + std::to_string(line_no) + ": expected key = value");
    }
    const std::string key = trim(std::string_view(line).substr(0, eq));
    if (key.empty()) throw ConfigError("config line " + std::to_string(line_no) + ": empty key");
    base.set(key, std::string_view(line).substr(eq + 1));
    ++keys;
  }
  if (keys == 0) throw ConfigError("empty configuration: no key = value lines");
  return base;
}

bool RunReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
}

namespace {

using Clock = std::chrono::steady_clock;

// Tolerances of the individual checks.
constexpr double kSymmetryTol = 0.0;
constexpr double kConstantTol = 1e-12;
constexpr double kSymbolTol = 1e-9;
constexpr double kFracTol = 1e-10;
constexpr double kSemigroupTol = 1e-11;
constexpr double kTimeDerivativeTol = 1e-6;
constexpr double kContractionSlack = 1e-12;
constexpr double kPathTol = 1e-6;
constexpr double kConstantQuadTol = 1e-10;
constexpr double kLimitTolTorus = 1e-3;
constexpr double kLimitTolOther = 2e-2;
constexpr double kPdeTolTorus = 1e-6;
constexpr double kPdeTolOther = 1e-5;

class Runner {
 public:
  explicit Runner(const ExperimentConfig& config)
      : cfg_(config), spec_{config.dims, config.n, config.L, config.mode} {
    report_.command = std::string(to_string(config.command));
    report_.config = config.canonical();
    report_.config_hash = config.hash();
    quad_.initial_nodes = config.quad_nodes;
    quad_.tolerance = config.tol;
  }

  RunReport run() {
    std::filesystem::create_directories(cfg_.out);
    switch (cfg_.command) {
      case Command::kAssemble: assemble(); break;
      case Command::kSpectrum: spectrum(); break;
      case Command::kFrac: frac(); break;
      case Command::kHeat: heat(); break;
      case Command::kExtend: extend(); break;
      case Command::kLimit: limit(); break;
      case Command::kVerifyAll:
        assemble();
        spectrum();
        frac();
        heat();
        extend();
        limit();
        estimates();
        algebra();
        break;
    }
    std::ostringstream csv;
    write_checks_csv(csv, report_);
    save("checks.csv", csv.str());
    report_.artifacts.push_back("results.json");
    write_file_atomic(cfg_.out / "results.json", render_json(report_));
    return report_;
  }

 private:
  void check(std::string name, double target, double achieved, double tolerance) {
    const bool pass = std::isfinite(achieved) && std::abs(achieved - target) <= tolerance;
    report_.checks.push_back({std::move(name), target, achieved, tolerance, pass});
  }
  void check_at_most(std::string name, double achieved, double bound) {
    const bool pass = std::isfinite(achieved) && achieved <= bound;
    report_.checks.push_back({std::move(name), 0.0, achieved, bound, pass});
  }
  void check_true(std::string name, bool ok) { check(std::move(name), 1.0, ok ? 1.0 : 0.0, 0.0); }

  template <class F>
  auto timed(const std::string& phase, F&& f) {
    const auto start = Clock::now();
    if constexpr (std::is_void_v<decltype(f())>) {
      f();
      report_.timing.push_back({phase, std::chrono::duration<double>(Clock::now() - start).count()});
    } else {
      auto r = f();
      report_.timing.push_back({phase, std::chrono::duration<double>(Clock::now() - start).count()});
      return r;
    }
  }

  void save(const std::string& name, const std::string& contents) {
    write_file_atomic(cfg_.out / name, contents);
    report_.artifacts.push_back(name);
  }
  void save_gf1(const std::string& name, const GridFunction& f) {
    write_gf1(cfg_.out / name, f);
    report_.artifacts.push_back(name);
  }
  static std::string tag(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", v);
    return buf;
  }

  const DiscreteOperator& op() {
    if (!op_) op_ = timed("assemble", [&] { return assemble_operator(cfg_.op, spec_); });
    return *op_;
  }
  bool dense_available() const { return spec_.node_count() <= cfg_.dense_limit; }
  const SpectralDecomposition& dense() {
    if (!dec_) {
      const auto& a = op();
      dec_ = timed("decompose", [&] { return spectral_decompose(a, cfg_.dense_limit); });
    }
    return *dec_;
  }
  // Fourier on the torus, the dense decomposition elsewhere.
  const SpectralBasis& basis() {
    if (spec_.periodic()) {
      if (!fourier_) fourier_.emplace(spec_);
      return *fourier_;
    }
    return dense();
  }
  const GridFunction& phi() {
    if (!phi_) {
      if (spec_.periodic()) {
        const double width =
            cfg_.phi_width > 0.0 ? cfg_.phi_width
                                 : std::max(4.0 * spec_.spacing(), spec_.L / std::numbers::pi);
        phi_ = periodic_bump(spec_, width, cfg_.seed);
      } else {
        phi_ = random_bumps(spec_, cfg_.seed);
      }
    }
    return *phi_;
  }

  void assemble() {
    const auto& a = op();
    const SparseMatrix at = a.matrix.transpose();
    const SparseMatrix diff = a.matrix - at;
    const double asym = diff.nonZeros() ? diff.coeffs().cwiseAbs().maxCoeff() : 0.0;
    check("operator symmetric (max |A - A^T|)", 0.0, asym, kSymmetryTol);
    const Eigen::VectorXd ones = Eigen::VectorXd::Ones(spec_.node_count());
    const Eigen::VectorXd a1 = a.matrix * ones;
    double worst = 0.0;
    for (int i = 0; i < spec_.node_count(); ++i) {
      if (is_interior(spec_, i)) worst = std::max(worst, std::abs(a1[i]));
    }
    const double scale = std::max(1.0, a.matrix.coeffs().cwiseAbs().maxCoeff());
    check_at_most("constants annihilated at interior nodes", worst / scale, kConstantTol);
    std::ostringstream mm;
    write_matrix_market(mm, a.matrix);
    save("operator.mtx", mm.str());
  }

  void spectrum() {
    if (!dense_available()) {
      report_.warnings.push_back("spectrum: " + std::to_string(spec_.node_count()) +
                                 " nodes exceed dense_limit; dense checks skipped");
      if (spec_.periodic()) {
        std::ostringstream csv;
        write_spectrum_csv(csv, basis().eigenvalues());
        save("spectrum.csv", csv.str());
      }
      return;
    }
    const auto& dec = dense();
    std::ostringstream csv;
    write_spectrum_csv(csv, dec.eigenvalues());
    save("spectrum.csv", csv.str());
    check_true("eigenvalues nonnegative", dec.lambda().minCoeff() >= 0.0);
    if (spec_.periodic()) {
      std::vector<double> symbol(basis().eigenvalues().begin(), basis().eigenvalues().end());
      std::sort(symbol.begin(), symbol.end());
      double worst = 0.0;
      for (std::size_t i = 0; i < symbol.size(); ++i) {
        worst = std::max(worst, std::abs(symbol[i] - dec.lambda()[static_cast<Eigen::Index>(i)]));
      }
      check_at_most("dense spectrum = Fourier symbol (abs)", worst, kSymbolTol);
    } else if (spec_.mode == GridMode::kEuclideanBox) {
      // Tensor sum of 1-D Dirichlet eigenvalues (2 - 2 cos(k pi / (n + 1))) / h^2.
      const double h = spec_.spacing();
      std::vector<double> one(static_cast<std::size_t>(spec_.n));
      for (int k = 1; k <= spec_.n; ++k) {
        one[static_cast<std::size_t>(k - 1)] =
            (2.0 - 2.0 * std::cos(k * std::numbers::pi / (spec_.n + 1))) / (h * h);
      }
      std::vector<double> all = {0.0};
      for (int d = 0; d < spec_.dims; ++d) {
        std::vector<double> next;
        for (double a : all) {
          for (double b : one) next.push_back(a + b);
        }
        all.swap(next);
      }
      std::sort(all.begin(), all.end());
      double worst = 0.0;
      for (std::size_t i = 0; i < all.size(); ++i) {
        worst = std::max(worst, std::abs(all[i] - dec.lambda()[static_cast<Eigen::Index>(i)]));
      }
      check_at_most("dense spectrum = Dirichlet closed form (abs)", worst, kSymbolTol);
    } else {
      check_true("smallest eigenvalue positive (no kernel under Dirichlet data)",
                 dec.lambda()[0] > 0.0);
    }
  }

  void frac() {
    const auto& b = basis();
    const auto& f = phi();
    save_gf1("phi.gf1", f);
    for (double s : cfg_.s) {
      const auto js = timed("frac s=" + tag(s), [&] { return fractional_power(b, s, f); });
      save_gf1("frac_s" + tag(s) + ".gf1", js);
      const auto half = fractional_power(b, 0.5 * s, fractional_power(b, 0.5 * s, f));
      check_at_most("J^(s/2) J^(s/2) = J^s, s=" + tag(s),
                    (half.values - js.values).norm() / js.values.norm(), kFracTol);
      if (spec_.periodic() && dense_available()) {
        check_at_most("dense vs Fourier J^s, s=" + tag(s), cross_validate(dense(), s, f), kFracTol);
      }
    }
    const auto j1 = fractional_power(b, 1.0, f);
    const auto af = operator_apply(op(), f);
    check_at_most("J^1 = A", (j1.values - af.values).norm() / af.values.norm(), kFracTol);
  }

  void heat() {
    const auto& b = basis();
    const auto& f = phi();
    const auto ts = cfg_.t_or_default();
    const auto h0 = heat_apply(b, 0.0, f);
    check_true("H_0 = identity (bitwise)", h0.values == f.values);
    std::ostringstream csv;
    csv << "t,mass,l1,l2,linf\n";
    for (double t : ts) {
      const auto k = timed("heat t=" + tag(t),
                           [&] { return heat_kernel_column(b, t, origin_node(spec_)); });
      save_gf1("heat_t" + tag(t) + ".gf1", k);
      csv << format_double(t) << ',' << format_double(integral(k)) << ','
          << format_double(lp_norm(k, 1)) << ',' << format_double(lp_norm(k, 2)) << ','
          << format_double(lp_norm(k, INFINITY)) << '\n';
      const auto ht = heat_apply(b, t, f);
      const auto composed = heat_apply(b, 0.5 * t, heat_apply(b, 0.5 * t, f));
      check_at_most("H_(t/2) H_(t/2) = H_t, t=" + tag(t),
                    (composed.values - ht.values).norm() / ht.values.norm(), kSemigroupTol);
      check_at_most("L2 contraction ratio, t=" + tag(t), lp_norm(ht, 2) / lp_norm(f, 2),
                    1.0 + kContractionSlack);
      check_at_most("d/dt H_t f = -A H_t f, t=" + tag(t), heat_time_derivative_check(b, t, f),
                    kTimeDerivativeTol);
    }
    save("heat_kernel.csv", csv.str());
  }

  void extend() {
    const auto& b = basis();
    const auto& f = phi();
    const double pde_tol = spec_.periodic() ? kPdeTolTorus : kPdeTolOther;
    for (double s : cfg_.s) {
      ExtensionParams params{s, cfg_.t_or_default(), quad_};
      if (cfg_.command == Command::kVerifyAll) params.t_values = {0.1, 0.5, 1.0};
      const auto profile = timed("extend s=" + tag(s), [&] { return extension_solve(b, params, f); });
      const double agreement = timed("tau grid s=" + tag(s),
                                     [&] { return extension_path_agreement(b, params, f); });
      check_at_most("per-mode vs tau-grid subordination, s=" + tag(s), agreement, kPathTol);
      for (double t : params.t_values) {
        check_at_most("extension PDE residual, s=" + tag(s) + " t=" + tag(t),
                      pde_residual(b, params, f, t), pde_tol);
      }
      const auto wp = l2_wellposedness_check(b, params, f);
      check_true("||u(t)|| <= ||phi||, s=" + tag(s), wp.non_expansive);
      check_true("||u(t)|| nonincreasing in t, s=" + tag(s), wp.monotone);
      check_true("||J u(t)|| within spectral bound, s=" + tag(s), wp.generator_bounded);
      const auto dir = "extension_s" + tag(s);
      export_profile(cfg_.out / dir, profile, agreement);
      report_.artifacts.push_back(dir + "/manifest.json");
    }
  }

  void limit() {
    const auto& b = basis();
    const auto& f = phi();
    const double tol = spec_.periodic() ? kLimitTolTorus : kLimitTolOther;
    std::ostringstream csv;
    csv << "s,t,raw_relative_error\n";
    for (double s : cfg_.s) {
      const double closed = extension_constant(s);
      const auto quad = extension_constant_quadrature(s, quad_);
      check_at_most("C(s) closed form vs quadrature, s=" + tag(s),
                    std::abs(closed - quad.value) / closed, kConstantQuadTol);
      ExtensionParams params{s, cfg_.t_or_default(), quad_};
      const auto r = timed("limit s=" + tag(s), [&] { return boundary_limit(b, params, f); });
      double error = r.relative_error;
      if (spec_.periodic()) {
        // Independent target straight from the FFT.
        const auto target = fourier_fractional(f, s);
        error = (r.extrapolant.values + r.constant * target.values).norm() /
                (r.constant * target.values.norm());
      }
      check_at_most("boundary limit vs -C(s) J^s phi, s=" + tag(s), error, tol);
      for (std::size_t i = 0; i < r.t_values.size(); ++i) {
        csv << format_double(s) << ',' << format_double(r.t_values[i]) << ','
            << format_double(r.raw_errors[i]) << '\n';
      }
      for (const auto& w : r.warnings) report_.warnings.push_back("limit s=" + tag(s) + ": " + w);
      save_gf1("limit_s" + tag(s) + ".gf1", r.extrapolant);
    }
    save("limit_sweep.csv", csv.str());
  }

  void estimates() {
    // Volume growth is grid independent.
    const std::vector<double> radii = geometric_samples(1.0, 4.0, 7);
    const auto heis = timed("volume", [&] { return volume_growth_fit(radii, 0.05, true); });
    check("homogeneous ball volume slope", 4.0, heis.fitted_slope, 0.3);
    const auto eucl = volume_growth_fit(radii, 0.05, false);
    check("euclidean ball volume slope", 3.0, eucl.fitted_slope, 0.2);

    if (spec_.periodic() || !dense_available()) return;
    const auto& b = basis();
    const auto w = resolvable_window(spec_);
    // One decade centered (geometrically) on the resolvable window.
    const double mid = std::sqrt(w.lo * w.hi);
    const TimeWindow decade{mid / std::sqrt(10.0), mid * std::sqrt(10.0)};
    const auto ts = geometric_samples(decade.lo, decade.hi, 6);
    std::ostringstream csv;
    csv << "s,p,t,norm\n";
    for (double s : cfg_.s) {
      for (double p : {1.0, 2.0}) {
        const auto fit = timed("decay s=" + tag(s), [&] { return kernel_norm_decay(b, s, p, ts, decade); });
        check("||J^s h_t||_" + tag(p) + " slope, s=" + tag(s), fit.target, fit.fitted_slope,
              p == 1.0 ? 0.15 : 0.2);
        for (std::size_t i = 0; i < ts.size(); ++i) {
          csv << format_double(s) << ',' << tag(p) << ',' << format_double(ts[i]) << ','
              << format_double(fit.norms[i]) << '\n';
        }
      }
    }
    save("decay.csv", csv.str());
    // Gaussian bound over three times filling the resolvable window.
    const std::vector<double> gt = {w.lo, std::sqrt(w.lo * w.hi), w.hi};
    const auto g = timed("gaussian", [&] { return gaussian_bound_check(b, gt, 0.5); });
    check_at_most("Gaussian log-gap spread over t (eps = 0.5)", g.spread, 2.0);
  }

  void algebra() {
    std::mt19937_64 rng(cfg_.seed);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    double assoc = 0.0, inv = 0.0, dil = 0.0;
    for (int i = 0; i < 100; ++i) {
      const GroupPoint x{u(rng), u(rng), u(rng)}, y{u(rng), u(rng), u(rng)}, z{u(rng), u(rng), u(rng)};
      const auto a = group_mul(group_mul(x, y), z), b = group_mul(x, group_mul(y, z));
      assoc = std::max({assoc, std::abs(a.x1 - b.x1), std::abs(a.x2 - b.x2), std::abs(a.x3 - b.x3)});
      const auto e = group_mul(x, group_inverse(x));
      inv = std::max({inv, std::abs(e.x1), std::abs(e.x2), std::abs(e.x3)});
      const double alpha = 0.5 + std::abs(u(rng));
      const auto l = dilate(alpha, group_mul(x, y));
      const auto r = group_mul(dilate(alpha, x), dilate(alpha, y));
      dil = std::max({dil, std::abs(l.x1 - r.x1), std::abs(l.x2 - r.x2), std::abs(l.x3 - r.x3)});
    }
    check_at_most("group associativity residual", assoc, 1e-12);
    check_at_most("group inverse residual", inv, 1e-12);
    check_at_most("dilation automorphism residual", dil, 1e-12);
  }

  ExperimentConfig cfg_;
  GridSpec spec_;
  QuadratureOptions quad_;
  RunReport report_;
  std::optional<DiscreteOperator> op_;
  std::optional<SpectralDecomposition> dec_;
  std::optional<FourierDiagonal> fourier_;
  std::optional<GridFunction> phi_;
};

}  // namespace

RunReport run(const ExperimentConfig& config) {
  config.validate();
  return Runner(config).run();
}

std::string render_table(const RunReport& report) {
  std::ostringstream os;
  char line[512];
  std::snprintf(line, sizeof line, "nilfrac %s  config %s\n", report.command.c_str(),
                report.config_hash.c_str());
  os << line;
  for (const auto& c : report.checks) {
    std::snprintf(line, sizeof line, "%-4s  %-58s target %-11.4g achieved %-12.5g tol %.3g\n",
                  c.pass ? "PASS" : "FAIL", c.name.c_str(), c.target, c.achieved, c.tolerance);
    os << line;
  }
  for (const auto& w : report.warnings) os << "warning: " << w << '\n';
  const auto failed =
      std::count_if(report.checks.begin(), report.checks.end(), [](const Check& c) { return !c.pass; });
  os << report.checks.size() - static_cast<std::size_t>(failed) << "/" << report.checks.size()
     << " checks passed\n";
  return os.str();
}

std::string render_json(const RunReport& report, bool with_timing) {
  nlohmann::ordered_json j;
  j["command"] = report.command;
  j["config_hash"] = report.config_hash;
  j["config"] = report.config;
  j["passed"] = report.passed();
  auto checks = nlohmann::ordered_json::array();
  for (const auto& c : report.checks) {
    checks.push_back({{"name", c.name},
                      {"target", c.target},
                      {"achieved", c.achieved},
                      {"tolerance", c.tolerance},
                      {"pass", c.pass}});
  }
  j["checks"] = checks;
  j["artifacts"] = report.artifacts;
  j["warnings"] = report.warnings;
  if (with_timing) {
    auto timing = nlohmann::ordered_json::array();
    for (const auto& p : report.timing) timing.push_back({{"phase", p.phase}, {"seconds", p.seconds}});
    j["timing"] = timing;
  }
  return j.dump(2) + "\n";
}

RunReport parse_report_json(std::string_view text) {
  const auto j = nlohmann::json::parse(text);
  RunReport r;
  r.command = j.at("command").get<std::string>();
  r.config_hash = j.at("config_hash").get<std::string>();
  r.config = j.at("config").get<std::string>();
  for (const auto& c : j.at("checks")) {
    r.checks.push_back({c.at("name").get<std::string>(), c.at("target").get<double>(),
                        c.at("achieved").get<double>(), c.at("tolerance").get<double>(),
                        c.at("pass").get<bool>()});
  }
  r.artifacts = j.at("artifacts").get<std::vector<std::string>>();
  r.warnings = j.at("warnings").get<std::vector<std::string>>();
  if (j.contains("timing")) {
    for (const auto& p : j.at("timing")) {
      r.timing.push_back({p.at("phase").get<std::string>(), p.at("seconds").get<double>()});
    }
  }
  return r;
}

void write_checks_csv(std::ostream& os, const RunReport& report) {
  os << "name,target,achieved,tolerance,pass\n";
  for (const auto& c : report.checks) {
    std::string name = c.name;
    std::replace(name.begin(), name.end(), ',', ';');
    os << '"' << name << "\"," << format_double(c.target) << ',' << format_double(c.achieved) << ','
       << format_double(c.tolerance) << ',' << (c.pass ? 1 : 0) << '\n';
  }
}

}  // namespace nilfrac
