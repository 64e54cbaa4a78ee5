#pragma once

#include <ostream>
#include <span>
#include <vector>

#include "nilfrac/spectral.hpp"
#include "nilfrac/stencil.hpp"

namespace nilfrac {

/// Least-squares line through (log x, log y).
struct DecayFit {
  std::vector<double> t_samples;
  std::vector<double> norms;
  double fitted_slope = 0.0;
  double intercept = 0.0;
  double slope_ci = 0.0;  // two standard errors of the slope
  double max_abs_residual = 0.0;
  double target = 0.0;

  bool within(double tolerance) const { return std::abs(fitted_slope - target) <= tolerance; }
};

DecayFit fit_loglog(std::span<const double> x, std::span<const double> y, double target);

/// n geometrically spaced samples from lo to hi inclusive.
std::vector<double> geometric_samples(double lo, double hi, int count);

/// Homogeneous dimension of the grid's volume law: 4 on the Heisenberg group, dims otherwise.
int homogeneous_dimension(const GridSpec& spec) noexcept;

/// Distance of a node from the origin: homogeneous norm (heisenberg) or Euclidean norm.
double node_radius(const GridSpec& spec, int node) noexcept;

/// [h^2, (L/4)^2]: resolved by the grid and clear of the boundary.
struct TimeWindow {
  double lo;
  double hi;
};
TimeWindow resolvable_window(const GridSpec& spec) noexcept;

/// ||J^s h_t||_p (p = 1 or 2) at t_samples, fitted on log-log axes. Targets:
/// -s for p = 1, -s - Q/4 for p = 2 with Q the homogeneous dimension.
/// Throws ConfigError when a sample leaves `window` or p is not 1 or 2.
DecayFit kernel_norm_decay(const SpectralBasis& basis, double s, double p,
                           std::span<const double> t_samples, TimeWindow window);

/// Same, with the window defaulting to resolvable_window(spec).
DecayFit kernel_norm_decay(const SpectralBasis& basis, double s, double p,
                           std::span<const double> t_samples);

struct GaussianBoundResult {
  std::vector<double> t_values;
  std::vector<double> log_gap;  // G(t)
  double sup_gap = 0.0;
  double spread = 0.0;  // max G - min G
  int skipped_nodes = 0;
  bool pass = false;    // finite and spread < 2
};

/// G(t) = max over interior nodes of log h_t(x) + |x|^2 / (4 (1 + eps) t) + log V(sqrt t),
/// V(r) = unit_volume r^Q. Nodes where the kernel is not above
/// `floor * max h_t` are skipped and counted.
GaussianBoundResult gaussian_log_gap(std::span<const GridFunction> kernels,
                                     std::span<const double> t_values, double epsilon,
                                     double unit_volume, double floor = 1e-12);

/// gaussian_log_gap on heat_kernel_column at the origin; V(1) from lattice_ball_volume.
GaussianBoundResult gaussian_bound_check(const SpectralBasis& basis,
                                         std::span<const double> t_values, double epsilon);

/// h^3 * #{lattice points of h Z^3 with norm < r}; homogeneous norm when
/// `heisenberg`, Euclidean norm otherwise. Also reports the raw count.
struct LatticeVolume {
  double volume;
  long long count;
};
LatticeVolume lattice_ball_volume(double r, double lattice_h, bool heisenberg);

/// log V against log r over `radii`. Target 4 (heisenberg) or 3.
/// Throws ConfigError when the smallest ball holds fewer than 1000 points.
DecayFit volume_growth_fit(std::span<const double> radii, double lattice_h, bool heisenberg);

/// ||(1 + |x|)^alpha X^I k||_p on a sampled kernel k (|I| <= 1, p in {1, 2}).
double weighted_norm(const GridFunction& kernel, double alpha, std::span<const FieldKind> multi_index,
                     double p);

/// weighted_norm of heat_kernel_column(t) at the origin. |I| >= 2 throws ConfigError.
double weighted_kernel_norm(const SpectralBasis& basis, double t, double alpha,
                            std::span<const FieldKind> multi_index, double p);

/// Relative gap between ||J^s h_t||_1 and (t/2)^{-s} ||M_{t/2} * h_{t/2}||_1,
/// M_tau the kernel of m(tau J) for m(mu) = mu^s e^{-mu}, with the convolution
/// carried out by group_convolve.
double multiplier_factorization_gap(const SpectralBasis& basis, double s, double t);

/// "t,norm" CSV rows.
void write_fit_csv(std::ostream& os, const DecayFit& fit);

}  // namespace nilfrac
