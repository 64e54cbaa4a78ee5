#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "nilfrac/quadrature.hpp"
#include "nilfrac/spectral.hpp"

namespace nilfrac {

// Extension problem  u_tt + ((1 - 2s)/t) u_t - J u = 0,  u(0) = phi,
// solved by heat-semigroup subordination
//   u(t) = (1/Gamma(s)) int_0^inf H_tau J^s phi e^{-t^2/(4 tau)} tau^{s-1} d tau.
// On one spectral point lambda this is the scalar multiplier
//   F_s(t, lambda) = (1/Gamma(s)) int_0^inf e^{-tau lambda} lambda^s e^{-t^2/(4 tau)} tau^{s-1} d tau,
// computed after rho = tau lambda, rho = e^sigma by the trapezoid rule in sigma.

/// Scalar multiplier and its first two t-derivatives at one (s, t, lambda).
struct ScalarExtension {
  double value = 0.0;
  double dt = 0.0;
  double dtt = 0.0;
  double error_estimate = 0.0;
};

/// F_s(t, lambda). F_s(0, lambda) = 1 and F_s(t, 0) = 1: the kernel of J is
/// carried through unchanged. Throws DomainError unless 0 < s < 1, t >= 0, lambda >= 0.
double scalar_extension_multiplier(double s, double t, double lambda,
                                   const QuadratureOptions& opts = {});

/// F, dF/dt and d2F/dt2 at t > 0 by differentiating under the integral.
ScalarExtension scalar_extension_derivatives(double s, double t, double lambda,
                                             const QuadratureOptions& opts = {});

/// |F'' + ((1 - 2s)/t) F' - lambda F| / (|F''| + |lambda F|).
double scalar_ode_residual(double s, double t, double lambda, const QuadratureOptions& opts = {});

/// C(s) = 4^{1-s} Gamma(1-s) / (2 Gamma(s)), so that
/// t^{1-2s} u_t -> -C(s) J^s phi as t -> 0+.
double extension_constant(double s);

/// C(s) as the integral (1/Gamma(s)) int_0^inf e^{-1/(4u)} / (2 u^{2-s}) du.
QuadratureResult extension_constant_quadrature(double s, const QuadratureOptions& opts = {});

struct ExtensionParams {
  double s = 0.5;
  std::vector<double> t_values;
  QuadratureOptions quadrature;

  /// Throws DomainError unless 0 < s < 1 and every t > 0.
  void validate() const;
};

struct ExtensionProfile {
  ExtensionParams params;
  std::vector<GridFunction> u;
  std::vector<GridFunction> du_dt;
  std::vector<double> quadrature_error_estimate;
};

/// Path A: per-eigenvalue scalar quadrature. One u and u_t per t value.
ExtensionProfile extension_solve(const SpectralBasis& basis, const ExtensionParams& params,
                                 const GridFunction& phi);

/// Path B: one tau grid shared by all modes, u(t) = sum_q w_q H_{tau_q} J^s phi
/// e^{-t^2/(4 tau_q)} tau_q^{s-1} / Gamma(s), plus the kernel of J unchanged.
GridFunction extension_solve_tau_grid(const SpectralBasis& basis, double s, double t,
                                      const GridFunction& phi, const QuadratureOptions& opts = {});

/// max over t of ||A - B||_2 / ||A||_2.
double extension_path_agreement(const SpectralBasis& basis, const ExtensionParams& params,
                                const GridFunction& phi);

std::vector<GridFunction> extension_dt(const SpectralBasis& basis, const ExtensionParams& params,
                                       const GridFunction& phi);
std::vector<GridFunction> extension_dtt(const SpectralBasis& basis, const ExtensionParams& params,
                                        const GridFunction& phi);

/// ||u_tt + ((1-2s)/t) u_t - J u||_2 / (||J u||_2 + ||u_tt||_2), every term
/// through its analytic multiplier.
double pde_residual(const SpectralBasis& basis, const ExtensionParams& params,
                    const GridFunction& phi, double t);

struct BoundaryLimitResult {
  GridFunction extrapolant;
  GridFunction target;  // -C(s) J^s phi
  double relative_error = 0.0;
  double constant = 0.0;  // C(s)
  std::vector<double> t_values;
  std::vector<GridFunction> raw;      // t^{1-2s} u_t per t
  std::vector<double> raw_errors;     // relative L2 distance of each raw value from target
  bool extrapolated = true;
  std::vector<std::string> warnings;
};

/// Richardson weights eliminating c1 t^p1 and c2 t^p2 from three samples.
std::vector<double> richardson_weights(const std::vector<double>& t, double p1, double p2);

/// Extrapolates t^{1-2s} u_t to t = 0 from the three smallest t values,
/// eliminating the t^{2-2s} and t^2 terms of its expansion. Falls back to the
/// smallest-t raw value (with a warning) when successive sweep differences
/// do not shrink. Throws DomainError for fewer than 3 or non-descending t.
BoundaryLimitResult boundary_limit(const SpectralBasis& basis, const ExtensionParams& params,
                                   const GridFunction& phi);

struct WellposednessReport {
  std::vector<double> norm_ratio;       // ||u(t)|| / ||phi||
  std::vector<double> generator_norm;   // ||J u(t)||
  std::vector<double> generator_bound;  // max_i lambda_i F(t, lambda_i) ||phi||
  bool non_expansive = true;
  bool generator_bounded = true;
  bool monotone = true;
};

WellposednessReport l2_wellposedness_check(const SpectralBasis& basis,
                                           const ExtensionParams& params,
                                           const GridFunction& phi);

/// One GF1 per (quantity, t) plus manifest.json.
void export_profile(const std::filesystem::path& dir, const ExtensionProfile& profile,
                    double path_agreement);

}  // namespace nilfrac
