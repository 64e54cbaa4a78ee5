#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "nilfrac/errors.hpp"
#include "nilfrac/quadrature.hpp"

using namespace nilfrac;

TEST(Quadrature, GaussianIntegral) {
  const auto r = integrate_log_concave([](double x) { return -0.5 * x * x; }, 0.0);
  EXPECT_NEAR(r.value, std::sqrt(2 * std::numbers::pi), 1e-12);
  EXPECT_LT(r.error_estimate, 1e-10);
  EXPECT_GE(r.nodes, 400);
}

TEST(Quadrature, GammaFunctionInLogVariables) {
  // int exp(a sigma - e^sigma) d sigma = Gamma(a); the peak sits at log a.
  for (double a : {0.1, 0.5, 1.0, 2.5, 7.0}) {
    const auto r = integrate_log_concave([a](double x) { return a * x - std::exp(x); }, std::log(a));
    EXPECT_NEAR(r.value, std::tgamma(a), 1e-10 * std::tgamma(a)) << a;
  }
}

TEST(Quadrature, ShiftedAndScaledPeak) {
  const double mu = 3.0, w = 0.01;
  const auto r = integrate_log_concave([&](double x) { return -0.5 * (x - mu) * (x - mu) / (w * w) + 5.0; }, mu);
  EXPECT_NEAR(r.value, std::exp(5.0) * w * std::sqrt(2 * std::numbers::pi), 1e-10 * r.value);
}

TEST(Quadrature, TailRange) {
  const auto range = concave_tail_range([](double x) { return -0.5 * x * x; }, 0.0, 40.0);
  EXPECT_NEAR(range.hi, std::sqrt(80.0), 2e-3);
  EXPECT_NEAR(range.lo, -std::sqrt(80.0), 2e-3);
}

TEST(Quadrature, ReportsNonConvergence) {
  QuadratureOptions opts;
  opts.tolerance = 0.0;
  opts.max_nodes = 1000;
  try {
    integrate_log_concave([](double x) { return -std::abs(x); }, 0.0, opts);
    FAIL() << "expected AccuracyError";
  } catch (const AccuracyError& e) {
    EXPECT_GE(e.estimate(), 0.0);
  }
}
