#include "nilfrac/estimates.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "nilfrac/convolution.hpp"
#include "nilfrac/errors.hpp"
#include "nilfrac/io.hpp"

namespace nilfrac {

DecayFit fit_loglog(std::span<const double> x, std::span<const double> y, double target) {
  if (x.size() != y.size() || x.size() < 2) {
    throw ConfigError("fit_loglog: need at least two (x, y) pairs of equal length");
  }
  const auto n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  std::vector<double> lx(x.size()), ly(y.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0)) throw ConfigError("fit_loglog: samples must be positive");
    lx[i] = std::log(x[i]);
    ly[i] = std::log(y[i]);
    mx += lx[i];
    my += ly[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
  }
  DecayFit fit;
  fit.t_samples.assign(x.begin(), x.end());
  fit.norms.assign(y.begin(), y.end());
  fit.target = target;
  fit.fitted_slope = sxy / sxx;
  fit.intercept = my - fit.fitted_slope * mx;
  double sse = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = ly[i] - (fit.intercept + fit.fitted_slope * lx[i]);
    sse += r * r;
    fit.max_abs_residual = std::max(fit.max_abs_residual, std::abs(r));
  }
  fit.slope_ci = x.size() > 2 ? 2.0 * std::sqrt(sse / (n - 2.0) / sxx) : 0.0;
  return fit;
}

std::vector<double> geometric_samples(double lo, double hi, int count) {
  if (count < 2 || !(lo > 0.0) || !(hi > lo)) {
    throw ConfigError("geometric_samples: need 0 < lo < hi and count >= 2");
  }
  std::vector<double> out(static_cast<std::size_t>(count));
  const double ratio = std::log(hi / lo) / (count - 1);
  for (int i = 0; i < count; ++i) out[static_cast<std::size_t>(i)] = lo * std::exp(ratio * i);
  out.back() = hi;
  return out;
}

int homogeneous_dimension(const GridSpec& spec) noexcept {
  return spec.mode == GridMode::kHeisenberg ? 4 : spec.dims;
}

double node_radius(const GridSpec& spec, int node) noexcept {
  const auto p = node_point(spec, node);
  if (spec.mode == GridMode::kHeisenberg) return homogeneous_norm(p);
  return std::sqrt(p.x1 * p.x1 + p.x2 * p.x2 + p.x3 * p.x3);
}

TimeWindow resolvable_window(const GridSpec& spec) noexcept {
  const double h = spec.spacing();
  return {h * h, spec.L * spec.L / 16.0};
}

DecayFit kernel_norm_decay(const SpectralBasis& basis, double s, double p,
                           std::span<const double> t_samples, TimeWindow window) {
  if (p != 1.0 && p != 2.0) throw ConfigError("kernel_norm_decay: p must be 1 or 2");
  for (double t : t_samples) {
    if (t < window.lo * (1 - 1e-12) || t > window.hi * (1 + 1e-12)) {
      throw ConfigError("kernel_norm_decay: t = " + format_double(t) +
                        " lies outside the resolvable window [" + format_double(window.lo) + ", " +
                        format_double(window.hi) + "]");
    }
  }
  const auto& spec = basis.spec();
  const auto delta = GridFunction::delta(spec, origin_node(spec));
  std::vector<double> norms;
  for (double t : t_samples) {
    const auto k = apply_multiplier(
        basis,
        {[s, t](double l) { return l > 0.0 ? std::pow(l, s) * std::exp(-t * l) : 0.0; }, "J^s h_t"},
        delta);
    norms.push_back(lp_norm(k, p));
  }
  const double q = homogeneous_dimension(spec);
  const double target = p == 1.0 ? -s : -s - q / 4.0;
  return fit_loglog(t_samples, norms, target);
}

DecayFit kernel_norm_decay(const SpectralBasis& basis, double s, double p,
                           std::span<const double> t_samples) {
  return kernel_norm_decay(basis, s, p, t_samples, resolvable_window(basis.spec()));
}

GaussianBoundResult gaussian_log_gap(std::span<const GridFunction> kernels,
                                     std::span<const double> t_values, double epsilon,
                                     double unit_volume, double floor) {
  if (!(epsilon > 0.0)) throw DomainError("gaussian bound requires epsilon > 0");
  if (kernels.size() != t_values.size() || kernels.empty()) {
    throw ShapeError("gaussian_log_gap: one kernel per t value required");
  }
  GaussianBoundResult out;
  out.t_values.assign(t_values.begin(), t_values.end());
  for (std::size_t j = 0; j < kernels.size(); ++j) {
    const auto& k = kernels[j];
    const auto& spec = k.spec;
    const double t = t_values[j];
    const double q = homogeneous_dimension(spec);
    const double log_v = std::log(unit_volume) + 0.5 * q * std::log(t);
    const double cutoff = floor * k.values.maxCoeff();
    double best = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < spec.node_count(); ++i) {
      if (!is_interior(spec, i)) continue;
      const double v = k.values[i];
      if (!(v > cutoff) || !(v > 0.0)) {
        ++out.skipped_nodes;
        continue;
      }
      const double r = node_radius(spec, i);
      best = std::max(best, std::log(v) + r * r / (4.0 * (1.0 + epsilon) * t) + log_v);
    }
    out.log_gap.push_back(best);
  }
  const auto [lo, hi] = std::minmax_element(out.log_gap.begin(), out.log_gap.end());
  out.sup_gap = *hi;
  out.spread = *hi - *lo;
  out.pass = std::isfinite(*lo) && std::isfinite(*hi) && out.spread < 2.0;
  return out;
}

GaussianBoundResult gaussian_bound_check(const SpectralBasis& basis,
                                         std::span<const double> t_values, double epsilon) {
  const auto& spec = basis.spec();
  std::vector<GridFunction> kernels;
  for (double t : t_values) kernels.push_back(heat_kernel_column(basis, t, origin_node(spec)));
  const bool heis = spec.mode == GridMode::kHeisenberg;
  double unit = 0.0;
  if (heis || spec.dims == 3) {
    unit = lattice_ball_volume(1.0, 0.05, heis).volume;
  } else {
    unit = spec.dims == 1 ? 2.0 : std::numbers::pi;
  }
  return gaussian_log_gap(kernels, t_values, epsilon, unit);
}

LatticeVolume lattice_ball_volume(double r, double lattice_h, bool heisenberg) {
  if (!(r > 0.0) || !(lattice_h > 0.0)) throw ConfigError("lattice_ball_volume: r and h must be > 0");
  const long reach = static_cast<long>(std::ceil(r / lattice_h));
  long long count = 0;
  // Number of integers k with |k h| < bound.
  auto column = [lattice_h](double bound) -> long long {
    if (bound <= 0.0) return 0;
    long k = static_cast<long>(std::floor(bound / lattice_h));
    if (k * lattice_h >= bound) --k;
    return 2 * static_cast<long long>(k) + 1;
  };
  for (long i = -reach; i <= reach; ++i) {
    for (long j = -reach; j <= reach; ++j) {
      const double rho2 = (i * lattice_h) * (i * lattice_h) + (j * lattice_h) * (j * lattice_h);
      if (rho2 >= r * r) continue;
      const double bound = heisenberg ? 0.25 * std::sqrt(r * r * r * r - rho2 * rho2)
                                      : std::sqrt(r * r - rho2);
      count += column(bound);
    }
  }
  return {static_cast<double>(count) * lattice_h * lattice_h * lattice_h, count};
}

DecayFit volume_growth_fit(std::span<const double> radii, double lattice_h, bool heisenberg) {
  if (radii.empty()) throw ConfigError("volume_growth_fit: no radii");
  std::vector<double> volumes;
  for (double r : radii) {
    const auto v = lattice_ball_volume(r, lattice_h, heisenberg);
    if (r == *std::min_element(radii.begin(), radii.end()) && v.count < 1000) {
      throw ConfigError("volume_growth_fit: smallest ball holds only " + std::to_string(v.count) +
                        " lattice points (need >= 1000); reduce lattice_h");
    }
    volumes.push_back(v.volume);
  }
  return fit_loglog(radii, volumes, heisenberg ? 4.0 : 3.0);
}

double weighted_norm(const GridFunction& kernel, double alpha, std::span<const FieldKind> multi_index,
                     double p) {
  if (multi_index.size() > 1) throw ConfigError("weighted_norm: |I| >= 2 is not supported");
  if (p != 1.0 && p != 2.0) throw ConfigError("weighted_norm: p must be 1 or 2");
  auto g = apply_multi_index(multi_index, kernel);
  for (int i = 0; i < g.spec.node_count(); ++i) {
    g.values[i] *= std::pow(1.0 + node_radius(g.spec, i), alpha);
  }
  return lp_norm(g, p);
}

double weighted_kernel_norm(const SpectralBasis& basis, double t, double alpha,
                            std::span<const FieldKind> multi_index, double p) {
  if (multi_index.size() > 1) throw ConfigError("weighted_kernel_norm: |I| >= 2 is not supported");
  return weighted_norm(heat_kernel_column(basis, t, origin_node(basis.spec())), alpha, multi_index, p);
}

double multiplier_factorization_gap(const SpectralBasis& basis, double s, double t) {
  const auto& spec = basis.spec();
  const auto delta = GridFunction::delta(spec, origin_node(spec));
  const auto direct = apply_multiplier(
      basis, {[s, t](double l) { return l > 0.0 ? std::pow(l, s) * std::exp(-t * l) : 0.0; }, "J^s h_t"},
      delta);
  const double half = 0.5 * t;
  const auto m_kernel = apply_multiplier(
      basis,
      {[s, half](double l) { return l > 0.0 ? std::pow(half * l, s) * std::exp(-half * l) : 0.0; },
       "m(t/2 J)"},
      delta);
  const auto heat = heat_kernel_column(basis, half, origin_node(spec));
  const auto product = group_convolve(m_kernel, heat);
  const double lhs = lp_norm(direct, 1.0);
  const double rhs = std::pow(half, -s) * lp_norm(product, 1.0);
  return std::abs(lhs - rhs) / lhs;
}

void write_fit_csv(std::ostream& os, const DecayFit& fit) {
  os << "t,norm\n";
  for (std::size_t i = 0; i < fit.t_samples.size(); ++i) {
    os << format_double(fit.t_samples[i]) << ',' << format_double(fit.norms[i]) << '\n';
  }
}

}  // namespace nilfrac
