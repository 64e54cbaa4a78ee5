#include "nilfrac/extension.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include "nilfrac/errors.hpp"
#include "nilfrac/io.hpp"

namespace nilfrac {
namespace {

void check_scalar_args(double s, double t, double lambda) {
  if (!(s > 0.0 && s < 1.0)) throw DomainError("extension: s must lie in (0, 1)");
  if (!(t >= 0.0)) throw DomainError("extension: t must be >= 0");
  if (!(lambda >= 0.0)) throw DomainError("extension: lambda must be >= 0");
}

// G_k(a) = int_0^inf e^{-rho} rho^{s-k} e^{-a/(4 rho)} d rho / rho, integrated in sigma = log rho.
QuadratureResult subordination_moment(double s, int k, double a, const QuadratureOptions& opts) {
  const double b = s - k;
  const double quarter_a = 0.25 * a;
  auto log_f = [=](double sigma) { return b * sigma - std::exp(sigma) - quarter_a * std::exp(-sigma); };
  // Peak solves y^2 - b y - a/4 = 0, y = e^sigma.
  const double root = std::sqrt(b * b + a);
  const double y = b >= 0.0 ? 0.5 * (b + root) : 0.5 * a / (root - b);
  return integrate_log_concave(log_f, std::log(y), opts);
}

// F, F', F'' for every eigenvalue of the basis, memoized on repeated eigenvalues.
std::vector<ScalarExtension> mode_table(const SpectralBasis& basis, double s, double t,
                                        const QuadratureOptions& opts) {
  const auto lambda = basis.eigenvalues();
  std::vector<ScalarExtension> out(lambda.size());
  std::map<double, ScalarExtension> cache;
  for (std::size_t i = 0; i < lambda.size(); ++i) {
    auto it = cache.find(lambda[i]);
    if (it == cache.end()) {
      it = cache.emplace(lambda[i], scalar_extension_derivatives(s, t, lambda[i], opts)).first;
    }
    out[i] = it->second;
  }
  return out;
}

template <class Pick>
GridFunction apply_table(const SpectralBasis& basis, const std::vector<ScalarExtension>& table,
                         const GridFunction& f, Pick pick) {
  std::vector<double> m(table.size());
  for (std::size_t i = 0; i < table.size(); ++i) m[i] = pick(table[i], basis.eigenvalues()[i]);
  return basis.apply_values(m, f);
}

double relative_l2(const GridFunction& a, const GridFunction& b) {
  return (a.values - b.values).norm() / b.values.norm();
}

}  // namespace

double scalar_extension_multiplier(double s, double t, double lambda, const QuadratureOptions& opts) {
  check_scalar_args(s, t, lambda);
  if (lambda == 0.0 || t == 0.0) return 1.0;
  return subordination_moment(s, 0, lambda * t * t, opts).value / std::tgamma(s);
}

ScalarExtension scalar_extension_derivatives(double s, double t, double lambda,
                                             const QuadratureOptions& opts) {
  check_scalar_args(s, t, lambda);
  if (lambda == 0.0) return {1.0, 0.0, 0.0, 0.0};
  if (t == 0.0) throw DomainError("extension: t-derivatives need t > 0");
  const double a = lambda * t * t;
  const double gamma = std::tgamma(s);
  const auto g0 = subordination_moment(s, 0, a, opts);
  const auto g1 = subordination_moment(s, 1, a, opts);
  const auto g2 = subordination_moment(s, 2, a, opts);
  const double tl = t * lambda;
  ScalarExtension out;
  out.value = g0.value / gamma;
  out.dt = -0.5 * tl * g1.value / gamma;
  out.dtt = (0.25 * tl * tl * g2.value - 0.5 * lambda * g1.value) / gamma;
  out.error_estimate = std::max({g0.error_estimate, g1.error_estimate, g2.error_estimate});
  return out;
}

double scalar_ode_residual(double s, double t, double lambda, const QuadratureOptions& opts) {
  const auto f = scalar_extension_derivatives(s, t, lambda, opts);
  const double residual = f.dtt + (1.0 - 2.0 * s) / t * f.dt - lambda * f.value;
  return std::abs(residual) / (std::abs(f.dtt) + std::abs(lambda * f.value));
}

double extension_constant(double s) {
  if (!(s > 0.0 && s < 1.0)) throw DomainError("extension_constant: s must lie in (0, 1)");
  return std::pow(4.0, 1.0 - s) * std::tgamma(1.0 - s) / (2.0 * std::tgamma(s));
}

QuadratureResult extension_constant_quadrature(double s, const QuadratureOptions& opts) {
  if (!(s > 0.0 && s < 1.0)) throw DomainError("extension_constant: s must lie in (0, 1)");
  // u = e^sigma: integrand * u = e^{-e^{-sigma}/4} e^{(s-1) sigma} / 2; peak at e^{-sigma} = 4(1-s).
  auto log_f = [s](double sigma) {
    return -0.25 * std::exp(-sigma) + (s - 1.0) * sigma - std::log(2.0);
  };
  auto r = integrate_log_concave(log_f, -std::log(4.0 * (1.0 - s)), opts);
  r.value /= std::tgamma(s);
  return r;
}

void ExtensionParams::validate() const {
  if (!(s > 0.0 && s < 1.0)) throw DomainError("extension: s must lie in (0, 1)");
  for (double t : t_values) {
    if (!(t > 0.0)) throw DomainError("extension: every t value must be > 0");
  }
}

ExtensionProfile extension_solve(const SpectralBasis& basis, const ExtensionParams& params,
                                 const GridFunction& phi) {
  params.validate();
  require_same_spec(basis.spec(), phi.spec, "extension_solve");
  ExtensionProfile profile;
  profile.params = params;
  for (double t : params.t_values) {
    const auto table = mode_table(basis, params.s, t, params.quadrature);
    profile.u.push_back(apply_table(basis, table, phi, [](const ScalarExtension& e, double) { return e.value; }));
    profile.du_dt.push_back(apply_table(basis, table, phi, [](const ScalarExtension& e, double) { return e.dt; }));
    double worst = 0.0;
    for (const auto& e : table) worst = std::max(worst, e.error_estimate);
    profile.quadrature_error_estimate.push_back(worst);
  }
  return profile;
}

GridFunction extension_solve_tau_grid(const SpectralBasis& basis, double s, double t,
                                      const GridFunction& phi, const QuadratureOptions& opts) {
  check_scalar_args(s, t, 0.0);
  if (!(t > 0.0)) throw DomainError("extension_solve_tau_grid: t must be > 0");
  const auto lambda = basis.eigenvalues();
  std::vector<double> positive;
  for (double l : lambda) {
    if (l > 0.0) positive.push_back(l);
  }
  std::sort(positive.begin(), positive.end());
  positive.erase(std::unique(positive.begin(), positive.end()), positive.end());

  // tau = e^sigma; per mode the sigma-integrand is exp(s sigma - lambda tau - t^2 / (4 tau)).
  const double quarter_t2 = 0.25 * t * t;
  double lo = 0.0, hi = 0.0;
  bool first = true;
  for (double l : positive) {
    auto log_f = [=](double sigma) { return s * sigma - l * std::exp(sigma) - quarter_t2 * std::exp(-sigma); };
    const double peak = std::log((s + std::sqrt(s * s + l * t * t)) / (2.0 * l));
    const auto r = concave_tail_range(log_f, peak, opts.tail_drop);
    lo = first ? r.lo : std::min(lo, r.lo);
    hi = first ? r.hi : std::max(hi, r.hi);
    first = false;
  }

  const auto m = positive.size();
  Eigen::VectorXd weights = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(m));
  if (m > 0) {
    Eigen::VectorXd pow_s(static_cast<Eigen::Index>(m));
    for (std::size_t i = 0; i < m; ++i) pow_s[static_cast<Eigen::Index>(i)] = std::pow(positive[i], s);
    auto accumulate = [&](double sigma, double w, Eigen::VectorXd& acc) {
      const double tau = std::exp(sigma);
      const double common = s * sigma - quarter_t2 / tau;
      for (std::size_t i = 0; i < m; ++i) {
        acc[static_cast<Eigen::Index>(i)] += w * std::exp(common - positive[i] * tau);
      }
    };
    int intervals = std::max(opts.initial_nodes - 1, 2);
    double step = (hi - lo) / intervals;
    Eigen::VectorXd sum = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(m));
    accumulate(lo, 0.5, sum);
    accumulate(hi, 0.5, sum);
    for (int j = 1; j < intervals; ++j) accumulate(lo + j * step, 1.0, sum);
    Eigen::VectorXd current = (sum * step).cwiseProduct(pow_s);
    while (true) {
      for (int j = 0; j < intervals; ++j) accumulate(lo + (j + 0.5) * step, 1.0, sum);
      intervals *= 2;
      step *= 0.5;
      Eigen::VectorXd refined = (sum * step).cwiseProduct(pow_s);
      const double change = (refined - current).cwiseAbs().maxCoeff() /
                            std::max(refined.cwiseAbs().maxCoeff(), 1e-300);
      current = refined;
      if (change < opts.tolerance) break;
      if (intervals + 1 > opts.max_nodes) {
        throw AccuracyError("tau-grid quadrature did not converge", change);
      }
    }
    weights = (sum * step) / std::tgamma(s);
  }

  // Heat-semigroup superposition applied to J^s phi, kernel modes passed through.
  std::vector<double> heat_weights(lambda.size(), 0.0);
  std::vector<double> kernel(lambda.size(), 0.0);
  for (std::size_t i = 0; i < lambda.size(); ++i) {
    if (lambda[i] > 0.0) {
      const auto pos = std::lower_bound(positive.begin(), positive.end(), lambda[i]) - positive.begin();
      heat_weights[i] = weights[static_cast<Eigen::Index>(pos)];
    } else {
      kernel[i] = 1.0;
    }
  }
  const auto js_phi = fractional_power(basis, s, phi);
  auto u = basis.apply_values(heat_weights, js_phi);
  u.values += basis.apply_values(kernel, phi).values;
  return u;
}

double extension_path_agreement(const SpectralBasis& basis, const ExtensionParams& params,
                                const GridFunction& phi) {
  const auto profile = extension_solve(basis, params, phi);
  double worst = 0.0;
  for (std::size_t j = 0; j < params.t_values.size(); ++j) {
    const auto b = extension_solve_tau_grid(basis, params.s, params.t_values[j], phi, params.quadrature);
    worst = std::max(worst, relative_l2(b, profile.u[j]));
  }
  return worst;
}

std::vector<GridFunction> extension_dt(const SpectralBasis& basis, const ExtensionParams& params,
                                       const GridFunction& phi) {
  params.validate();
  std::vector<GridFunction> out;
  for (double t : params.t_values) {
    const auto table = mode_table(basis, params.s, t, params.quadrature);
    out.push_back(apply_table(basis, table, phi, [](const ScalarExtension& e, double) { return e.dt; }));
  }
  return out;
}

std::vector<GridFunction> extension_dtt(const SpectralBasis& basis, const ExtensionParams& params,
                                        const GridFunction& phi) {
  params.validate();
  std::vector<GridFunction> out;
  for (double t : params.t_values) {
    const auto table = mode_table(basis, params.s, t, params.quadrature);
    out.push_back(apply_table(basis, table, phi, [](const ScalarExtension& e, double) { return e.dtt; }));
  }
  return out;
}

double pde_residual(const SpectralBasis& basis, const ExtensionParams& params,
                    const GridFunction& phi, double t) {
  params.validate();
  if (!(t > 0.0)) throw DomainError("pde_residual: t must be > 0");
  const double s = params.s;
  const auto table = mode_table(basis, s, t, params.quadrature);
  const auto utt = apply_table(basis, table, phi, [](const ScalarExtension& e, double) { return e.dtt; });
  const auto ju = apply_table(basis, table, phi, [](const ScalarExtension& e, double l) { return l * e.value; });
  const auto residual = apply_table(basis, table, phi, [&](const ScalarExtension& e, double l) {
    return e.dtt + (1.0 - 2.0 * s) / t * e.dt - l * e.value;
  });
  return residual.values.norm() / (ju.values.norm() + utt.values.norm());
}

std::vector<double> richardson_weights(const std::vector<double>& t, double p1, double p2) {
  if (t.size() != 3) throw DomainError("richardson_weights: exactly three samples required");
  Eigen::Matrix3d v;
  for (int i = 0; i < 3; ++i) {
    v(i, 0) = 1.0;
    v(i, 1) = std::pow(t[static_cast<std::size_t>(i)], p1);
    v(i, 2) = std::pow(t[static_cast<std::size_t>(i)], p2);
  }
  const Eigen::Vector3d w = v.transpose().fullPivLu().solve(Eigen::Vector3d(1.0, 0.0, 0.0));
  return {w[0], w[1], w[2]};
}

BoundaryLimitResult boundary_limit(const SpectralBasis& basis, const ExtensionParams& params,
                                   const GridFunction& phi) {
  params.validate();
  const auto& ts = params.t_values;
  if (ts.size() < 3) throw DomainError("boundary_limit: need at least three t values");
  for (std::size_t i = 1; i < ts.size(); ++i) {
    if (!(ts[i] < ts[i - 1])) throw DomainError("boundary_limit: t values must be strictly descending");
  }
  const double s = params.s;
  BoundaryLimitResult out;
  out.constant = extension_constant(s);
  out.t_values = ts;
  out.target = fractional_power(basis, s, phi);
  out.target.values *= -out.constant;

  const auto du = extension_dt(basis, params, phi);
  for (std::size_t i = 0; i < ts.size(); ++i) {
    GridFunction r = du[i];
    r.values *= std::pow(ts[i], 1.0 - 2.0 * s);
    out.raw_errors.push_back(relative_l2(r, out.target));
    out.raw.push_back(std::move(r));
  }

  bool shrinking = true;
  double previous = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < ts.size(); ++i) {
    const double d = (out.raw[i].values - out.raw[i - 1].values).norm();
    if (!(d < previous)) shrinking = false;
    previous = d;
  }

  const std::size_t k = ts.size() - 3;
  if (shrinking) {
    const auto w = richardson_weights({ts[k], ts[k + 1], ts[k + 2]}, 2.0 - 2.0 * s, 2.0);
    out.extrapolant = GridFunction(phi.spec);
    for (int i = 0; i < 3; ++i) {
      out.extrapolant.values += w[static_cast<std::size_t>(i)] * out.raw[k + static_cast<std::size_t>(i)].values;
    }
  } else {
    out.extrapolated = false;
    out.extrapolant = out.raw.back();
    out.warnings.push_back(
        "boundary_limit: sweep differences do not shrink; using the smallest-t raw value");
  }
  out.relative_error = relative_l2(out.extrapolant, out.target);
  return out;
}

WellposednessReport l2_wellposedness_check(const SpectralBasis& basis,
                                           const ExtensionParams& params,
                                           const GridFunction& phi) {
  params.validate();
  WellposednessReport report;
  const double phi_norm = phi.values.norm();
  const auto lambda = basis.eigenvalues();
  std::vector<std::pair<double, double>> by_t;
  for (double t : params.t_values) {
    std::vector<double> f(lambda.size()), lf(lambda.size());
    double bound = 0.0;
    for (std::size_t i = 0; i < lambda.size(); ++i) {
      f[i] = scalar_extension_multiplier(params.s, t, lambda[i], params.quadrature);
      lf[i] = lambda[i] * f[i];
      bound = std::max(bound, lf[i]);
    }
    const auto u = basis.apply_values(f, phi);
    const auto ju = basis.apply_values(lf, phi);
    const double w = std::sqrt(phi.spec.cell_volume());
    const double ratio = u.values.norm() / phi_norm;
    report.norm_ratio.push_back(ratio);
    report.generator_norm.push_back(w * ju.values.norm());
    report.generator_bound.push_back(w * bound * phi_norm);
    if (!(ratio <= 1.0 + 1e-12)) report.non_expansive = false;
    if (!(report.generator_norm.back() <= report.generator_bound.back() * (1.0 + 1e-12))) {
      report.generator_bounded = false;
    }
    by_t.emplace_back(t, ratio);
  }
  std::sort(by_t.begin(), by_t.end());
  for (std::size_t i = 1; i < by_t.size(); ++i) {
    if (by_t[i].second > by_t[i - 1].second * (1.0 + 1e-12)) report.monotone = false;
  }
  return report;
}

void export_profile(const std::filesystem::path& dir, const ExtensionProfile& profile,
                    double path_agreement) {
  std::filesystem::create_directories(dir);
  nlohmann::json manifest;
  manifest["s"] = profile.params.s;
  manifest["t_values"] = profile.params.t_values;
  manifest["quadrature"] = {{"initial_nodes", profile.params.quadrature.initial_nodes},
                            {"tolerance", profile.params.quadrature.tolerance},
                            {"error_estimate", profile.quadrature_error_estimate}};
  manifest["path_agreement"] = path_agreement;
  manifest["C_s_used"] = extension_constant(profile.params.s);
  nlohmann::json files = nlohmann::json::array();
  for (std::size_t j = 0; j < profile.u.size(); ++j) {
    const auto u_name = "u_" + std::to_string(j) + ".gf1";
    const auto du_name = "du_dt_" + std::to_string(j) + ".gf1";
    write_gf1(dir / u_name, profile.u[j]);
    write_gf1(dir / du_name, profile.du_dt[j]);
    files.push_back({{"t", profile.params.t_values[j]}, {"u", u_name}, {"du_dt", du_name}});
  }
  manifest["files"] = files;
  write_file_atomic(dir / "manifest.json", manifest.dump(2) + "\n");
}

}  // namespace nilfrac
