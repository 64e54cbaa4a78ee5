#pragma once

#include <vector>

#include "nilfrac/spectral.hpp"

namespace nilfrac {

/// The periodic finite-difference Laplacian on a euclidean torus,
/// diagonalized by the discrete Fourier transform (FFTW). Mode k has symbol
/// sum_d (2 - 2 cos(2 pi k_d / n)) / h^2, flat-indexed like the grid.
class FourierDiagonal final : public SpectralBasis {
 public:
  /// Throws ConfigError unless spec is a euclidean_torus.
  explicit FourierDiagonal(const GridSpec& spec);

  const GridSpec& spec() const override { return spec_; }
  std::span<const double> eigenvalues() const override { return symbol_; }
  GridFunction apply_values(std::span<const double> multiplier,
                            const GridFunction& f) const override;

 private:
  GridSpec spec_;
  std::vector<double> symbol_;
};

/// symbol^s applied through the FFT; the zero mode maps to 0.
GridFunction fourier_fractional(const GridFunction& phi, double s);

/// max |J^s phi (dense) - J^s phi (Fourier)| / max |J^s phi (Fourier)|.
double cross_validate(const SpectralDecomposition& dec, double s, const GridFunction& phi);

}  // namespace nilfrac
