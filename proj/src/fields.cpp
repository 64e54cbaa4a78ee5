#include "nilfrac/fields.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "nilfrac/errors.hpp"

namespace nilfrac {

GridFunction random_bumps(const GridSpec& spec, std::uint64_t seed, int count) {
  spec.validate();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double h = spec.spacing();
  const double period = 2.0 * spec.L;

  struct Bump {
    double amplitude;
    double width;
    double center[3];
  };
  std::vector<Bump> bumps(static_cast<std::size_t>(count));
  for (auto& b : bumps) {
    b.amplitude = (unit(rng) < 0.5 ? -1.0 : 1.0) * (0.5 + unit(rng));
    b.width = h * (4.0 + unit(rng));
    for (int d = 0; d < 3; ++d) b.center[d] = d < spec.dims ? spec.L * (unit(rng) - 0.5) : 0.0;
  }

  return GridFunction::sample(spec, [&](const std::array<double, 3>& x) {
    double value = 0.0;
    for (const auto& b : bumps) {
      double r2 = 0.0;
      for (int d = 0; d < spec.dims; ++d) {
        double dx = x[static_cast<std::size_t>(d)] - b.center[d];
        if (spec.periodic()) dx -= period * std::round(dx / period);
        r2 += dx * dx;
      }
      value += b.amplitude * std::exp(-0.5 * r2 / (b.width * b.width));
    }
    if (!spec.periodic()) {
      for (int d = 0; d < spec.dims; ++d) {
        const double c = std::cos(0.5 * std::numbers::pi * x[static_cast<std::size_t>(d)] / spec.L);
        value *= c * c;
      }
    }
    return value;
  });
}

GridFunction gaussian_bump(const GridSpec& spec, double width) {
  return GridFunction::sample(spec, [&](const std::array<double, 3>& x) {
    const double r2 = x[0] * x[0] + x[1] * x[1] + x[2] * x[2];
    return std::exp(-0.5 * r2 / (width * width));
  });
}

GridFunction periodic_bump(const GridSpec& spec, double width, std::uint64_t seed) {
  if (!spec.periodic()) throw ConfigError("periodic_bump needs a euclidean_torus grid");
  if (!(width > 0.0)) throw ConfigError("periodic_bump: width must be > 0");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double center[3] = {0.0, 0.0, 0.0};
  for (int d = 0; d < spec.dims; ++d) center[d] = spec.L * (unit(rng) - 0.5);
  const double k = std::numbers::pi / spec.L;  // 2 pi / period
  const double kappa = 1.0 / (k * width * k * width);
  return GridFunction::sample(spec, [&](const std::array<double, 3>& x) {
    double e = 0.0;
    for (int d = 0; d < spec.dims; ++d) {
      e += std::cos(k * (x[static_cast<std::size_t>(d)] - center[d])) - 1.0;
    }
    return std::exp(kappa * e);
  });
}

GridFunction random_normal(const GridSpec& spec, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  GridFunction out(spec);
  for (Eigen::Index i = 0; i < out.values.size(); ++i) out.values[i] = normal(rng);
  return out;
}

}  // namespace nilfrac
