#pragma once

#include <functional>
#include <ostream>
#include <span>
#include <string>

#include <Eigen/Core>

#include "nilfrac/grid.hpp"
#include "nilfrac/stencil.hpp"

namespace nilfrac {

/// Anything that diagonalizes a nonnegative self-adjoint operator on a grid:
/// m(A) f is obtained by transforming f, scaling mode i by m(eigenvalues()[i])
/// and transforming back.
class SpectralBasis {
 public:
  virtual ~SpectralBasis() = default;

  virtual const GridSpec& spec() const = 0;
  virtual std::span<const double> eigenvalues() const = 0;

  /// m(A) f where `multiplier[i]` is m at eigenvalues()[i].
  virtual GridFunction apply_values(std::span<const double> multiplier,
                                    const GridFunction& f) const = 0;
};

/// Finite stand-in for the spectral resolution of A = Q diag(lambda) Q^T.
class SpectralDecomposition final : public SpectralBasis {
 public:
  SpectralDecomposition(GridSpec spec, OperatorKind kind, Eigen::VectorXd eigenvalues,
                        Eigen::MatrixXd eigenvectors, std::string solver = "dsyevd");

  const GridSpec& spec() const override { return spec_; }
  std::span<const double> eigenvalues() const override {
    return {eigenvalues_.data(), static_cast<std::size_t>(eigenvalues_.size())};
  }
  GridFunction apply_values(std::span<const double> multiplier,
                            const GridFunction& f) const override;

  OperatorKind operator_kind() const noexcept { return kind_; }
  /// "dsyevd", or "eigen" when the LAPACK result failed validation.
  const std::string& solver() const noexcept { return solver_; }
  const Eigen::VectorXd& lambda() const noexcept { return eigenvalues_; }
  /// Orthonormal (Euclidean) eigenvectors, one per column.
  const Eigen::MatrixXd& eigenvectors() const noexcept { return eigenvectors_; }

  /// Q^T f.
  Eigen::VectorXd coefficients(const GridFunction& f) const;
  /// Q c.
  GridFunction synthesize(const Eigen::VectorXd& c) const;

 private:
  GridSpec spec_;
  OperatorKind kind_;
  Eigen::VectorXd eigenvalues_;
  Eigen::MatrixXd eigenvectors_;
  std::string solver_;
};

inline constexpr int kDefaultDenseLimit = 6000;

/// Dense symmetric eigendecomposition (LAPACK dsyevd). Eigenvalues ascend;
/// entries with |lambda| <= 1e-10 ||A||_max are set to exactly 0.
/// The result is checked on random probe vectors (orthogonality and
/// reconstruction); if LAPACK fails the check, Eigen's self-adjoint solver is
/// used instead, and EvaluationError is thrown if that fails too.
/// Throws CapacityError above `dense_limit` nodes and DomainError when A has
/// an eigenvalue below -1e-10 ||A||_max.
SpectralDecomposition spectral_decompose(const DiscreteOperator& op,
                                         int dense_limit = kDefaultDenseLimit);

struct ScalarMultiplier {
  std::function<double(double)> m;
  std::string label;
};

/// Throws EvaluationError naming the eigenvalue when m is not finite there.
GridFunction apply_multiplier(const SpectralBasis& basis, const ScalarMultiplier& m,
                              const GridFunction& f);

/// lambda^s with 0^s = 0. Throws DomainError for s <= 0.
ScalarMultiplier power_multiplier(double s);
ScalarMultiplier heat_multiplier(double t);

GridFunction fractional_power(const SpectralBasis& basis, double s, const GridFunction& f);

/// H_t f = e^{-tA} f for t >= 0; H_0 returns f untouched.
GridFunction heat_apply(const SpectralBasis& basis, double t, const GridFunction& f);

/// H_t applied to the h^{-dims} delta at `node`; approximates h_t(x0^{-1} . x).
GridFunction heat_kernel_column(const SpectralBasis& basis, double t, int node);

/// || (H_{t+d} f - H_{t-d} f) / 2d + A H_t f ||_2 / || A H_t f ||_2 with d = 1e-4 t.
double heat_time_derivative_check(const SpectralBasis& basis, double t, const GridFunction& f);

/// sum_i m(lambda_i) <f, q_i> <g, q_i> with Haar weights; m = lambda gives <A f, g>.
double spectral_pairing(const SpectralDecomposition& dec, const GridFunction& f,
                        const GridFunction& g, const ScalarMultiplier& m);

/// "index,eigenvalue" rows with 17 significant digits.
void write_spectrum_csv(std::ostream& os, std::span<const double> eigenvalues);

}  // namespace nilfrac
