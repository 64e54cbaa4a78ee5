#include "nilfrac/spectral.hpp"

#include <lapacke.h>

#include <Eigen/Eigenvalues>
#include <cmath>
#include <iostream>
#include <random>
#include <vector>

#include "nilfrac/errors.hpp"
#include "nilfrac/io.hpp"

namespace nilfrac {

SpectralDecomposition::SpectralDecomposition(GridSpec spec, OperatorKind kind,
                                             Eigen::VectorXd eigenvalues,
                                             Eigen::MatrixXd eigenvectors, std::string solver)
    : spec_(spec),
      kind_(kind),
      eigenvalues_(std::move(eigenvalues)),
      eigenvectors_(std::move(eigenvectors)),
      solver_(std::move(solver)) {
  if (eigenvectors_.rows() != spec_.node_count() || eigenvectors_.cols() != eigenvalues_.size()) {
    throw ShapeError("SpectralDecomposition: eigenvector shape does not match the grid");
  }
}

Eigen::VectorXd SpectralDecomposition::coefficients(const GridFunction& f) const {
  require_same_spec(spec_, f.spec, "SpectralDecomposition::coefficients");
  return eigenvectors_.transpose() * f.values;
}

GridFunction SpectralDecomposition::synthesize(const Eigen::VectorXd& c) const {
  return GridFunction(spec_, eigenvectors_ * c);
}

GridFunction SpectralDecomposition::apply_values(std::span<const double> multiplier,
                                                 const GridFunction& f) const {
  if (multiplier.size() != static_cast<std::size_t>(eigenvalues_.size())) {
    throw ShapeError("apply_values: multiplier length does not match the spectrum");
  }
  Eigen::VectorXd c = coefficients(f);
  for (Eigen::Index i = 0; i < c.size(); ++i) c[i] *= multiplier[static_cast<std::size_t>(i)];
  return synthesize(c);
}

namespace {

// Worst relative residual of Q Q^T x = x and Q diag(w) Q^T x = A x over a few
// fixed random probes. O(N^2) per probe.
double decomposition_residual(const Eigen::MatrixXd& a, const Eigen::VectorXd& w,
                              const Eigen::MatrixXd& q) {
  std::mt19937_64 rng(0x5eedULL);
  std::normal_distribution<double> normal;
  const double scale = std::max(w.cwiseAbs().maxCoeff(), 1.0);
  double worst = 0.0;
  for (int probe = 0; probe < 3; ++probe) {
    Eigen::VectorXd x(a.rows());
    for (Eigen::Index i = 0; i < x.size(); ++i) x[i] = normal(rng);
    const Eigen::VectorXd c = q.transpose() * x;
    const Eigen::VectorXd back = q * c;
    const Eigen::VectorXd ax = a.selfadjointView<Eigen::Lower>() * x;
    const Eigen::VectorXd rebuilt = q * (w.asDiagonal() * c);
    worst = std::max(worst, (back - x).norm() / x.norm());
    worst = std::max(worst, (rebuilt - ax).norm() / (scale * x.norm()));
  }
  return worst;
}

constexpr double kDecompositionTolerance = 1e-9;

}  // namespace

SpectralDecomposition spectral_decompose(const DiscreteOperator& op, int dense_limit) {
  const int n = static_cast<int>(op.matrix.rows());
  if (n > dense_limit) {
    throw CapacityError("spectral_decompose: " + std::to_string(n) +
                        " nodes exceed the dense limit of " + std::to_string(dense_limit) +
                        "; use a smaller grid");
  }
  const Eigen::MatrixXd dense = Eigen::MatrixXd(op.matrix);
  const double norm_max = n > 0 ? dense.cwiseAbs().maxCoeff() : 0.0;
  Eigen::MatrixXd q = dense;
  Eigen::VectorXd w(n);
  std::string solver = "dsyevd";
  if (n > 0) {
    const lapack_int info = LAPACKE_dsyevd(LAPACK_COL_MAJOR, 'V', 'L', n, q.data(), n, w.data());
    const double residual = info == 0 ? decomposition_residual(dense, w, q) : INFINITY;
    if (!(residual <= kDecompositionTolerance)) {
      // Seen with OpenBLAS AVX-512 kernels on some CPUs: dsyevd returns info 0
      // with non-orthogonal eigenvectors.
      std::cerr << "warning: dsyevd result failed validation (info " << info << ", residual "
                << format_double(residual) << "); falling back to Eigen's solver\n";
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(dense);
      if (es.info() != Eigen::Success) {
        throw EvaluationError("spectral_decompose: Eigen's self-adjoint solver did not converge");
      }
      w = es.eigenvalues();
      q = es.eigenvectors();
      solver = "eigen";
      const double again = decomposition_residual(dense, w, q);
      if (!(again <= kDecompositionTolerance)) {
        throw EvaluationError("spectral_decompose: decomposition residual " + format_double(again) +
                              " exceeds " + format_double(kDecompositionTolerance));
      }
    }
  }
  const double tol = 1e-10 * norm_max;
  for (Eigen::Index i = 0; i < w.size(); ++i) {
    if (w[i] < -tol) {
      throw DomainError("spectral_decompose: eigenvalue " + format_double(w[i]) +
                        " is negative beyond roundoff; operator is not PSD");
    }
    if (std::abs(w[i]) <= tol) w[i] = 0.0;
  }
  return SpectralDecomposition(op.spec, op.kind, std::move(w), std::move(q), std::move(solver));
}

GridFunction apply_multiplier(const SpectralBasis& basis, const ScalarMultiplier& m,
                              const GridFunction& f) {
  const auto lambda = basis.eigenvalues();
  std::vector<double> values(lambda.size());
  for (std::size_t i = 0; i < lambda.size(); ++i) {
    values[i] = m.m(lambda[i]);
    if (!std::isfinite(values[i])) {
      throw EvaluationError("multiplier '" + m.label + "' is not finite at lambda = " +
                            format_double(lambda[i]));
    }
  }
  return basis.apply_values(values, f);
}

ScalarMultiplier power_multiplier(double s) {
  if (!(s > 0.0)) throw DomainError("fractional power needs s > 0");
  return {[s](double lambda) { return lambda > 0.0 ? std::pow(lambda, s) : 0.0; },
          "lambda^" + format_double(s)};
}

ScalarMultiplier heat_multiplier(double t) {
  if (!(t >= 0.0)) throw DomainError("heat semigroup needs t >= 0");
  return {[t](double lambda) { return std::exp(-t * lambda); }, "exp(-" + format_double(t) + " lambda)"};
}

GridFunction fractional_power(const SpectralBasis& basis, double s, const GridFunction& f) {
  return apply_multiplier(basis, power_multiplier(s), f);
}

GridFunction heat_apply(const SpectralBasis& basis, double t, const GridFunction& f) {
  const auto m = heat_multiplier(t);
  if (t == 0.0) {
    require_same_spec(basis.spec(), f.spec, "heat_apply");
    return f;
  }
  return apply_multiplier(basis, m, f);
}

GridFunction heat_kernel_column(const SpectralBasis& basis, double t, int node) {
  if (!(t > 0.0)) throw DomainError("heat_kernel_column needs t > 0");
  return heat_apply(basis, t, GridFunction::delta(basis.spec(), node));
}

double heat_time_derivative_check(const SpectralBasis& basis, double t, const GridFunction& f) {
  if (!(t > 0.0)) throw DomainError("heat_time_derivative_check needs t > 0");
  const double delta = 1e-4 * t;
  const auto plus = heat_apply(basis, t + delta, f);
  const auto minus = heat_apply(basis, t - delta, f);
  const auto generator = apply_multiplier(
      basis, {[t](double lambda) { return lambda * std::exp(-t * lambda); }, "lambda exp(-t lambda)"},
      f);
  const Eigen::VectorXd residual = (plus.values - minus.values) / (2.0 * delta) + generator.values;
  return residual.norm() / generator.values.norm();
}

double spectral_pairing(const SpectralDecomposition& dec, const GridFunction& f,
                        const GridFunction& g, const ScalarMultiplier& m) {
  const Eigen::VectorXd cf = dec.coefficients(f);
  const Eigen::VectorXd cg = dec.coefficients(g);
  double acc = 0.0;
  for (Eigen::Index i = 0; i < cf.size(); ++i) acc += m.m(dec.lambda()[i]) * cf[i] * cg[i];
  return dec.spec().cell_volume() * acc;
}

void write_spectrum_csv(std::ostream& os, std::span<const double> eigenvalues) {
  os << "index,eigenvalue\n";
  for (std::size_t i = 0; i < eigenvalues.size(); ++i) {
    os << i << ',' << format_double(eigenvalues[i]) << '\n';
  }
}

}  // namespace nilfrac
