// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any FAIL.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <numbers>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "nilfrac/blas_env.hpp"
#include "nilfrac/convolution.hpp"
#include "nilfrac/estimates.hpp"
#include "nilfrac/extension.hpp"
#include "nilfrac/fields.hpp"
#include "nilfrac/fourier.hpp"
#include "nilfrac/group.hpp"
#include "nilfrac/spectral.hpp"
#include "nilfrac/stencil.hpp"

using namespace nilfrac;

namespace {

struct Measure {
  std::string what;
  double value;
  double tol;
  bool pass() const { return std::isfinite(value) && value <= tol; }
};

double rel_l2(const GridFunction& a, const GridFunction& b) {
  return (a.values - b.values).norm() / b.values.norm();
}

double rel_max(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  return (a - b).cwiseAbs().maxCoeff() / b.cwiseAbs().maxCoeff();
}

constexpr double kInf = std::numeric_limits<double>::infinity();
const GridSpec kTorus{1, 64, std::numbers::pi, GridMode::kEuclideanTorus};
const GridSpec kHeis{3, 15, 4.0, GridMode::kHeisenberg};
const std::vector<double> kS = {0.3, 0.5, 0.7};
const std::vector<double> kLimitSweep = {0.1, 0.05, 0.025};

std::optional<SpectralDecomposition> heis_dec;

const SpectralDecomposition& heis() {
  if (!heis_dec) heis_dec.emplace(spectral_decompose(assemble_operator(OperatorKind::kJ1, kHeis)));
  return *heis_dec;
}

GridFunction torus_phi() { return periodic_bump(kTorus, 1.0, 1); }

std::vector<Measure> constant_cs() {
  double worst = 0.0;
  for (double s : {0.1, 0.3, 0.5, 0.7, 0.9}) {
    const double closed = extension_constant(s);
    worst = std::max(worst, std::abs(extension_constant_quadrature(s).value - closed) / closed);
  }
  return {{"closed form vs quadrature", worst, 1e-10},
          {"|C(0.5) - 1|", std::abs(extension_constant(0.5) - 1.0), 1e-14}};
}

std::vector<Measure> limit_torus() {
  const auto dec = spectral_decompose(assemble_operator(OperatorKind::kEuclid, kTorus));
  const auto phi = torus_phi();
  double worst = 0.0;
  for (double s : kS) {
    const auto r = boundary_limit(dec, {s, kLimitSweep, {}}, phi);
    // Target through the FFT, independent of the dense basis used for the sweep.
    GridFunction target = fourier_fractional(phi, s);
    target.values *= -extension_constant(s);
    worst = std::max(worst, rel_l2(r.extrapolant, target));
  }
  return {{"max rel L2 over s", worst, 1e-3}};
}

std::vector<Measure> limit_heisenberg() {
  const auto& dec = heis();
  const auto phi = random_bumps(kHeis, 1);
  double worst = 0.0;
  for (double s : kS) {
    const auto r = boundary_limit(dec, {s, kLimitSweep, {}}, phi);
    worst = std::max(worst, r.relative_error);
  }
  return {{"max rel L2 over s", worst, 2e-2}};
}

std::vector<Measure> extension_pde() {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> us(0.05, 0.95), ut(0.05, 3.0), ul(-3.0, 3.0);
  double ode = 0.0;
  for (int k = 0; k < 20; ++k) {
    const double s = us(rng), t = ut(rng), lambda = std::pow(10.0, ul(rng));
    ode = std::max(ode, scalar_ode_residual(s, t, lambda));
  }
  const FourierDiagonal fd(kTorus);
  const auto phi = torus_phi();
  double torus = 0.0;
  for (double s : kS) {
    for (double t : {0.1, 0.5, 1.0}) torus = std::max(torus, pde_residual(fd, {s, {t}, {}}, phi, t));
  }
  const auto hphi = random_bumps(kHeis, 1);
  double heis_res = 0.0;
  for (double s : {0.3, 0.7}) heis_res = std::max(heis_res, pde_residual(heis(), {s, {0.5}, {}}, hphi, 0.5));
  return {{"scalar ODE (20 random)", ode, 1e-8}, {"torus grid", torus, 1e-6}, {"heisenberg grid", heis_res, 1e-5}};
}

std::vector<Measure> oracle_equivalence() {
  const auto d1 = spectral_decompose(assemble_operator(OperatorKind::kEuclid, kTorus));
  double fourier = 0.0;
  for (double s : kS) fourier = std::max(fourier, cross_validate(d1, s, torus_phi()));
  const GridSpec plane{2, 16, 2.0, GridMode::kEuclideanTorus};
  const auto d2 = spectral_decompose(assemble_operator(OperatorKind::kEuclid, plane));
  fourier = std::max(fourier, cross_validate(d2, 0.3, random_normal(plane, 2)));

  const GridSpec small{3, 9, 2.0, GridMode::kHeisenberg};
  const auto d3 = spectral_decompose(assemble_operator(OperatorKind::kJ1, small));
  double paths = 0.0;
  for (double s : kS) {
    const ExtensionParams p{s, {0.1, 0.5, 1.0}, {}};
    paths = std::max(paths, extension_path_agreement(d1, p, torus_phi()));
    paths = std::max(paths, extension_path_agreement(d3, p, random_bumps(small, 2)));
  }
  return {{"dense vs Fourier", fourier, 1e-10}, {"path A vs path B", paths, 1e-6}};
}

std::vector<Measure> semigroup() {
  const auto& dec = heis();
  double identity = 0.0, law = 0.0, contraction = 0.0;
  for (int k = 0; k < 50; ++k) {
    const auto f = random_normal(kHeis, 100 + static_cast<std::uint64_t>(k));
    identity = std::max(identity, (heat_apply(dec, 0.0, f).values - f.values).cwiseAbs().maxCoeff());
    const auto a = heat_apply(dec, 0.2, heat_apply(dec, 0.3, f));
    const auto b = heat_apply(dec, 0.5, f);
    law = std::max(law, rel_max(a.values, b.values));
    for (double t : {0.1, 0.5, 1.0}) {
      const auto g = t == 0.5 ? b : heat_apply(dec, t, f);
      for (double p : {1.0, 2.0, kInf}) {
        contraction = std::max(contraction, lp_norm(g, p) / lp_norm(f, p) - 1.0);
      }
    }
  }
  return {{"H_0 - Id (max abs)", identity, 0.0},
          {"H_s H_t - H_{s+t}", law, 1e-11},
          {"max ||H_t f||_p/||f||_p - 1", std::max(contraction, 0.0), 1e-12}};
}

std::vector<Measure> additivity() {
  const auto& dec = heis();
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.05, 0.95);
  double worst = 0.0;
  for (int k = 0; k < 20; ++k) {
    const double s1 = u(rng), s2 = u(rng);
    const auto f = random_normal(kHeis, 200 + static_cast<std::uint64_t>(k));
    const auto composed = fractional_power(dec, s1, fractional_power(dec, s2, f));
    const auto direct = fractional_power(dec, s1 + s2, f);
    worst = std::max(worst, rel_l2(composed, direct));
  }
  return {{"J^s1 J^s2 vs J^(s1+s2)", worst, 1e-10}};
}

std::vector<Measure> kernel_decay() {
  const auto& dec = heis();
  const auto w = resolvable_window(kHeis);
  const double mid = std::sqrt(w.lo * w.hi);
  const TimeWindow decade{mid / std::sqrt(10.0), mid * std::sqrt(10.0)};
  const auto ts = geometric_samples(decade.lo, decade.hi, 6);
  double l1 = 0.0, l2 = 0.0;
  for (double s : kS) {
    const auto f1 = kernel_norm_decay(dec, s, 1, ts, decade);
    const auto f2 = kernel_norm_decay(dec, s, 2, ts, decade);
    l1 = std::max(l1, std::abs(f1.fitted_slope - f1.target));
    l2 = std::max(l2, std::abs(f2.fitted_slope - f2.target));
  }
  return {{"|L1 slope + s|", l1, 0.15}, {"|L2 slope + s + 1|", l2, 0.2}};
}

std::vector<Measure> gaussian() {
  const GridSpec spec{3, 17, std::sqrt(6.4), GridMode::kHeisenberg};
  const auto dec = spectral_decompose(assemble_operator(OperatorKind::kJ1, spec));
  const std::vector<double> ts = {0.1, 0.2, 0.4};
  const auto g = gaussian_bound_check(dec, ts, 0.5);
  const bool finite = std::isfinite(g.sup_gap) && std::isfinite(g.spread);
  return {{"log-gap spread", finite ? g.spread : kInf, 2.0}};
}

std::vector<Measure> volume() {
  const auto radii = geometric_samples(1.0, 4.0, 7);
  const auto heis_fit = volume_growth_fit(radii, 0.05, true);
  const auto eucl_fit = volume_growth_fit(radii, 0.05, false);
  return {{"|homogeneous slope - 4|", std::abs(heis_fit.fitted_slope - 4.0), 0.3},
          {"|euclidean slope - 3|", std::abs(eucl_fit.fitted_slope - 3.0), 0.2}};
}

std::vector<Measure> algebra() {
  const GridSpec spec{3, 9, 2.0, GridMode::kHeisenberg};
  using Poly = double (*)(double, double, double);
  const Poly polys[] = {
      [](double, double, double) { return 1.0; },
      [](double a, double b, double c) { return a - 2 * b + c; },
      [](double a, double b, double) { return a * b; },
      [](double a, double, double c) { return a * c; },
      [](double, double b, double c) { return b * c + b * b; },
      [](double a, double b, double c) { return c * c - a * a + 3 * a * b; },
  };
  const FieldKind x12[] = {FieldKind::kX1, FieldKind::kX2}, x21[] = {FieldKind::kX2, FieldKind::kX1};
  const FieldKind tt[] = {FieldKind::kT};
  double commutator = 0.0;
  for (auto p : polys) {
    const auto f = GridFunction::sample(spec, [p](const std::array<double, 3>& x) { return p(x[0], x[1], x[2]); });
    const auto a = apply_multi_index(x12, f), b = apply_multi_index(x21, f), t = apply_multi_index(tt, f);
    for (int i = 0; i < spec.node_count(); ++i) {
      if (is_interior(spec, i, 2)) {
        commutator = std::max(commutator, std::abs(a.values[i] - b.values[i] - t.values[i]));
      }
    }
  }

  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-2.0, 2.0), ua(0.25, 4.0);
  double group = 0.0;
  auto gap = [](const GroupPoint& a, const GroupPoint& b) {
    return std::max({std::abs(a.x1 - b.x1), std::abs(a.x2 - b.x2), std::abs(a.x3 - b.x3)});
  };
  for (int k = 0; k < 10000; ++k) {
    const GroupPoint x{u(rng), u(rng), u(rng)}, y{u(rng), u(rng), u(rng)}, z{u(rng), u(rng), u(rng)};
    group = std::max(group, gap(group_mul(group_mul(x, y), z), group_mul(x, group_mul(y, z))));
    group = std::max(group, gap(group_mul(x, group_inverse(x)), kIdentity));
    group = std::max(group, gap(group_mul(group_inverse(x), x), kIdentity));
    const double alpha = ua(rng);
    group = std::max(group, gap(dilate(alpha, group_mul(x, y)), group_mul(dilate(alpha, x), dilate(alpha, y))) /
                                (alpha * alpha));
  }

  const GridSpec yspec{3, 7, 2.0, GridMode::kHeisenberg};
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double young = 0.0;
  for (int k = 0; k < 50; ++k) {
    GridFunction f(yspec), g(yspec);
    for (auto& v : f.values) v = unit(rng);
    for (auto& v : g.values) v = unit(rng);
    const auto c = group_convolve(f, g);
    const double ratios[] = {
        lp_norm(c, 1) / (lp_norm(f, 1) * lp_norm(g, 1)),
        lp_norm(c, 2) / (lp_norm(f, 1) * lp_norm(g, 2)),
        lp_norm(c, kInf) / (lp_norm(f, 2) * lp_norm(g, 2)),
        lp_norm(c, kInf) / (lp_norm(f, 1) * lp_norm(g, kInf)),
    };
    for (double r : ratios) young = std::max(young, r - 1.0);
  }
  return {{"[X1,X2] - T on quadratics", commutator, 1e-12},
          {"group law residuals", group, 1e-12},
          {"Young ratio - 1", std::max(young, 0.0), 1e-9}};
}

std::vector<Measure> initial_value() {
  const FourierDiagonal fd(kTorus);
  const auto phi = torus_phi();
  double initial = 0.0, expansion = 0.0;
  for (double s : kS) {
    const ExtensionParams p{s, {1e-3, 0.1, 0.5, 1.0}, {}};
    const auto prof = extension_solve(fd, p, phi);
    initial = std::max(initial, rel_l2(prof.u[0], phi));
    const auto rep = l2_wellposedness_check(fd, p, phi);
    for (double r : rep.norm_ratio) expansion = std::max(expansion, r - 1.0);
    if (!rep.non_expansive) expansion = std::max(expansion, kInf);
  }
  return {{"||u(1e-3) - phi|| / ||phi||", initial, 0.01}, {"max ||u(t)||/||phi|| - 1", std::max(expansion, 0.0), 0.0}};
}

struct Criterion {
  int id;
  std::string title;
  double budget_seconds;
  std::function<std::vector<Measure>()> body;
};

}  // namespace

int main(int argc, char** argv) {
  pin_openblas_core(argc, argv);
  const std::vector<Criterion> criteria = {
      {1, "extension constant C(s)", 1, constant_cs},
      {2, "boundary limit, euclidean torus n=64", 10, limit_torus},
      {3, "boundary limit, heisenberg n=15", 300, limit_heisenberg},
      {4, "extension PDE residuals", 30, extension_pde},
      {5, "oracle equivalence", 30, oracle_equivalence},
      {6, "heat semigroup axioms", 30, semigroup},
      {7, "fractional additivity", 10, additivity},
      {8, "kernel norm decay, heisenberg n=15", 300, kernel_decay},
      {9, "Gaussian bound log-gap", 60, gaussian},
      {10, "volume growth", 60, volume},
      {11, "algebra and Young", 10, algebra},
      {12, "initial value and non-expansiveness", 10, initial_value},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    std::vector<Measure> measures;
    std::string error;
    try {
      measures = c.body();
    } catch (const std::exception& e) {
      error = e.what();
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    bool pass = error.empty() && seconds <= c.budget_seconds;
    std::string detail;
    for (const auto& m : measures) {
      pass = pass && m.pass();
      char buf[160];
      std::snprintf(buf, sizeof buf, "%s%s = %.3g (tol %.3g)", detail.empty() ? "" : "; ", m.what.c_str(),
                    m.value, m.tol);
      detail += buf;
    }
    if (!error.empty()) detail = "error: " + error;
    std::printf("%s  [%2d] %-40s %s  time %.2f s (budget %.0f s)\n", pass ? "PASS" : "FAIL", c.id,
                c.title.c_str(), detail.c_str(), seconds, c.budget_seconds);
    std::fflush(stdout);
    if (!pass) ++failures;
  }
  std::printf("%d/%zu acceptance criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
