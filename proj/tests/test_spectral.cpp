#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "nilfrac/errors.hpp"
#include "nilfrac/fields.hpp"
#include "nilfrac/fourier.hpp"
#include "nilfrac/spectral.hpp"

using namespace nilfrac;

namespace {

const GridSpec kHeis7{3, 7, 2.0, GridMode::kHeisenberg};

const SpectralDecomposition& heis7() {
  static const auto dec = spectral_decompose(assemble_operator(OperatorKind::kJ1, kHeis7));
  return dec;
}

double max_abs(const Eigen::VectorXd& v) { return v.cwiseAbs().maxCoeff(); }

}  // namespace

TEST(Spectral, DirichletThreePointEigenvalues) {
  const GridSpec spec{1, 3, 1.0, GridMode::kEuclideanBox};
  const auto dec = spectral_decompose(assemble_operator(OperatorKind::kEuclid, spec));
  for (int k = 1; k <= 3; ++k) {
    EXPECT_NEAR(dec.lambda()[k - 1], 2 - 2 * std::cos(k * std::numbers::pi / 4), 1e-14);
  }
}

TEST(Spectral, DirichletEigenvaluesOnLargerBox) {
  // Closed form of the 1-D Dirichlet second difference with n nodes: (2 - 2cos(k pi/(n+1))) / h^2.
  const GridSpec spec{1, 41, 2.0, GridMode::kEuclideanBox};
  const auto dec = spectral_decompose(assemble_operator(OperatorKind::kEuclid, spec));
  const double h = spec.spacing();
  for (int k = 1; k <= spec.n; ++k) {
    const double exact = (2 - 2 * std::cos(k * std::numbers::pi / (spec.n + 1))) / (h * h);
    EXPECT_NEAR(dec.lambda()[k - 1], exact, 1e-11 * exact);
  }
}

TEST(Spectral, DecompositionIsOrthonormalAndReconstructs) {
  const auto& dec = heis7();
  EXPECT_EQ(dec.solver(), "dsyevd");
  const Eigen::MatrixXd& q = dec.eigenvectors();
  const auto n = q.cols();
  EXPECT_LE((q.transpose() * q - Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff(), 1e-12);
  const Eigen::MatrixXd a(assemble_operator(OperatorKind::kJ1, kHeis7).matrix);
  const Eigen::MatrixXd rebuilt = q * dec.lambda().asDiagonal() * q.transpose();
  EXPECT_LE((rebuilt - a).cwiseAbs().maxCoeff(), 1e-10 * a.cwiseAbs().maxCoeff());
  // Trace is preserved.
  EXPECT_NEAR(dec.lambda().sum(), a.trace(), 1e-10 * a.trace());
  for (Eigen::Index i = 1; i < dec.lambda().size(); ++i) EXPECT_LE(dec.lambda()[i - 1], dec.lambda()[i]);
}

TEST(Spectral, SubellipticOperatorsAreDefiniteOnTheBox) {
  EXPECT_GT(heis7().lambda()[0], 0.0);
  const auto j3 = spectral_decompose(assemble_operator(OperatorKind::kJ3, kHeis7));
  EXPECT_GT(j3.lambda()[0], 0.0);
}

TEST(Spectral, TorusKernelIsTheConstants) {
  const GridSpec spec{2, 8, 1.0, GridMode::kEuclideanTorus};
  const auto dec = spectral_decompose(assemble_operator(OperatorKind::kEuclid, spec));
  EXPECT_EQ(dec.lambda()[0], 0.0);
  EXPECT_GT(dec.lambda()[1], 1.0);
}

TEST(Spectral, SquareMultiplierIsOperatorApplyTwice) {
  const auto& dec = heis7();
  const auto op = assemble_operator(OperatorKind::kJ1, kHeis7);
  const auto f = random_normal(kHeis7, 3);
  const auto sq = apply_multiplier(dec, {[](double l) { return l * l; }, "lambda^2"}, f);
  const auto direct = operator_apply(op, operator_apply(op, f));
  EXPECT_LE(max_abs(sq.values - direct.values), 1e-9 * max_abs(direct.values));
}

TEST(Spectral, FractionalPowers) {
  const auto& dec = heis7();
  const auto op = assemble_operator(OperatorKind::kJ1, kHeis7);
  const auto f = random_normal(kHeis7, 5);
  const auto af = operator_apply(op, f);
  EXPECT_LE(max_abs(fractional_power(dec, 1.0, f).values - af.values), 1e-11 * max_abs(af.values));
  for (double s : {0.3, 0.5, 0.8}) {
    const auto half = fractional_power(dec, s / 2, f);
    const auto twice = fractional_power(dec, s / 2, half);
    const auto whole = fractional_power(dec, s, f);
    EXPECT_LE(max_abs(twice.values - whole.values), 1e-10 * max_abs(whole.values));
  }
  EXPECT_THROW(power_multiplier(0.0), DomainError);
  EXPECT_THROW(power_multiplier(-0.5), DomainError);
}

TEST(Spectral, NonFiniteMultiplierNamesTheEigenvalue) {
  const GridSpec spec{1, 8, 1.0, GridMode::kEuclideanTorus};
  const auto dec = spectral_decompose(assemble_operator(OperatorKind::kEuclid, spec));
  const auto f = random_normal(spec, 1);
  try {
    apply_multiplier(dec, {[](double l) { return 1.0 / l; }, "inverse"}, f);
    FAIL() << "expected EvaluationError";
  } catch (const EvaluationError& e) {
    EXPECT_NE(std::string(e.what()).find("inverse"), std::string::npos);
  }
}

TEST(Spectral, HeatSemigroup) {
  const auto& dec = heis7();
  const auto f = random_normal(kHeis7, 7);
  EXPECT_EQ(heat_apply(dec, 0.0, f).values, f.values);
  const auto two_steps = heat_apply(dec, 0.15, heat_apply(dec, 0.1, f));
  const auto one_step = heat_apply(dec, 0.25, f);
  EXPECT_LE(max_abs(two_steps.values - one_step.values), 1e-11 * max_abs(f.values));
  EXPECT_LE(lp_norm(one_step, 2), lp_norm(f, 2) * (1 + 1e-12));
  // J^s commutes with H_t.
  const auto a = fractional_power(dec, 0.4, heat_apply(dec, 0.2, f));
  const auto b = heat_apply(dec, 0.2, fractional_power(dec, 0.4, f));
  EXPECT_LE(max_abs(a.values - b.values), 1e-11 * max_abs(a.values));
}

TEST(Spectral, HeatTimeDerivative) {
  const auto& dec = heis7();
  const auto f = random_bumps(kHeis7, 2);
  const double r1 = heat_time_derivative_check(dec, 0.1, f);
  const double r2 = heat_time_derivative_check(dec, 0.2, f);
  EXPECT_LE(r1, 1e-6);
  EXPECT_LE(r2, 1e-6);
  EXPECT_LE(r2, 4 * std::max(r1, 1e-12));
}

TEST(Spectral, TorusHeatKernelMassSymmetryAndSign) {
  const GridSpec spec{1, 64, std::numbers::pi, GridMode::kEuclideanTorus};
  const auto dec = spectral_decompose(assemble_operator(OperatorKind::kEuclid, spec));
  const int origin = origin_node(spec);
  for (double t : {0.05, 0.3, 1.0}) {
    const auto k = heat_kernel_column(dec, t, origin);
    EXPECT_NEAR(integral(k), 1.0, 1e-12);
    EXPECT_GE(k.values.minCoeff(), -1e-8);
    for (int j = 1; j < spec.n / 2; ++j) {
      EXPECT_NEAR(k.values[origin + j], k.values[origin - j], 1e-12);
    }
    // Continuum comparison: periodized Gaussian (4 pi t)^{-1/2} exp(-x^2/4t), to O(h^2).
    const double h = spec.spacing();
    double worst = 0.0;
    for (int i = 0; i < spec.n; ++i) {
      const double x = spec.coordinate(i);
      double g = 0.0;
      for (int w = -3; w <= 3; ++w) {
        const double y = x + 2 * spec.L * w;
        g += std::exp(-y * y / (4 * t)) / std::sqrt(4 * std::numbers::pi * t);
      }
      worst = std::max(worst, std::abs(k.values[i] - g));
    }
    EXPECT_LE(worst, 0.2 * h * h * std::pow(t, -1.5));
  }
}

TEST(Spectral, PairingReproducesInnerProducts) {
  const auto& dec = heis7();
  const auto op = assemble_operator(OperatorKind::kJ1, kHeis7);
  const auto f = random_normal(kHeis7, 11), g = random_normal(kHeis7, 12);
  const double exact = inner(operator_apply(op, f), g);
  EXPECT_NEAR(spectral_pairing(dec, f, g, {[](double l) { return l; }, "lambda"}), exact,
              1e-10 * std::abs(exact) + 1e-10);
  EXPECT_NEAR(spectral_pairing(dec, f, g, {[](double) { return 1.0; }, "one"}), inner(f, g), 1e-10);
}

TEST(Spectral, DenseLimitIsEnforced) {
  EXPECT_THROW(spectral_decompose(assemble_operator(OperatorKind::kJ1, kHeis7), 100), CapacityError);
}

TEST(Spectral, SpectrumCsv) {
  const std::vector<double> ev = {0.0, 0.1, 2.5};
  std::ostringstream os;
  write_spectrum_csv(os, ev);
  std::istringstream in(os.str());
  std::string line;
  std::getline(in, line);
  if (line.rfind("index", 0) == 0) std::getline(in, line);
  EXPECT_EQ(line, "0,0");
  std::getline(in, line);
  EXPECT_EQ(line, "1,0.10000000000000001");
}
