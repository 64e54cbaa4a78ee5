#include "nilfrac/fourier.hpp"

#include <fftw3.h>

#include <cmath>
#include <complex>
#include <memory>
#include <numbers>

#include "nilfrac/errors.hpp"

namespace nilfrac {
namespace {

struct FftwBuffer {
  explicit FftwBuffer(std::size_t n)
      : data(static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * n))) {}
  ~FftwBuffer() { fftw_free(data); }
  FftwBuffer(const FftwBuffer&) = delete;
  FftwBuffer& operator=(const FftwBuffer&) = delete;
  fftw_complex* data;
};

struct PlanDeleter {
  void operator()(fftw_plan_s* p) const { fftw_destroy_plan(p); }
};
using Plan = std::unique_ptr<fftw_plan_s, PlanDeleter>;

}  // namespace

FourierDiagonal::FourierDiagonal(const GridSpec& spec) : spec_(spec) {
  spec.validate();
  if (!spec.periodic()) {
    throw ConfigError("Fourier oracle requires a euclidean_torus grid");
  }
  const int total = spec.node_count();
  const double h2 = spec.spacing() * spec.spacing();
  std::vector<double> axis(static_cast<std::size_t>(spec.n));
  for (int k = 0; k < spec.n; ++k) {
    axis[static_cast<std::size_t>(k)] =
        (2.0 - 2.0 * std::cos(2.0 * std::numbers::pi * k / spec.n)) / h2;
  }
  symbol_.assign(static_cast<std::size_t>(total), 0.0);
  for (int i = 0; i < total; ++i) {
    const auto idx = unravel(spec, i);
    double acc = 0.0;
    for (int d = 0; d < spec.dims; ++d) acc += axis[static_cast<std::size_t>(idx[static_cast<std::size_t>(d)])];
    symbol_[static_cast<std::size_t>(i)] = acc;
  }
}

GridFunction FourierDiagonal::apply_values(std::span<const double> multiplier,
                                           const GridFunction& f) const {
  require_same_spec(spec_, f.spec, "FourierDiagonal::apply_values");
  if (multiplier.size() != symbol_.size()) {
    throw ShapeError("apply_values: multiplier length does not match the spectrum");
  }
  const auto total = symbol_.size();
  FftwBuffer buf(total);
  int shape[3] = {spec_.n, spec_.n, spec_.n};
  Plan forward(fftw_plan_dft(spec_.dims, shape, buf.data, buf.data, FFTW_FORWARD, FFTW_ESTIMATE));
  Plan backward(fftw_plan_dft(spec_.dims, shape, buf.data, buf.data, FFTW_BACKWARD, FFTW_ESTIMATE));
  for (std::size_t i = 0; i < total; ++i) {
    buf.data[i][0] = f.values[static_cast<Eigen::Index>(i)];
    buf.data[i][1] = 0.0;
  }
  fftw_execute(forward.get());
  for (std::size_t i = 0; i < total; ++i) {
    buf.data[i][0] *= multiplier[i];
    buf.data[i][1] *= multiplier[i];
  }
  fftw_execute(backward.get());
  GridFunction out(spec_);
  const double scale = 1.0 / static_cast<double>(total);
  for (std::size_t i = 0; i < total; ++i) {
    out.values[static_cast<Eigen::Index>(i)] = buf.data[i][0] * scale;
  }
  return out;
}

GridFunction fourier_fractional(const GridFunction& phi, double s) {
  const FourierDiagonal diag(phi.spec);
  return fractional_power(diag, s, phi);
}

double cross_validate(const SpectralDecomposition& dec, double s, const GridFunction& phi) {
  const auto dense = fractional_power(dec, s, phi);
  const auto fourier = fourier_fractional(phi, s);
  return (dense.values - fourier.values).cwiseAbs().maxCoeff() /
         fourier.values.cwiseAbs().maxCoeff();
}

}  // namespace nilfrac
