#pragma once

#include <cstdint>

#include "nilfrac/grid.hpp"

namespace nilfrac {

/// Sum of `count` Gaussian bumps with seeded random signs, amplitudes and
/// centers in the inner half-box, standard deviation in [4h, 5h].
/// Box modes are multiplied by prod_d cos^2(pi x_d / (2L)) so the result
/// vanishes smoothly on the boundary; torus bumps use the periodic distance.
GridFunction random_bumps(const GridSpec& spec, std::uint64_t seed, int count = 3);

/// exp(-|x|^2 / (2 width^2)) centered at the origin (Euclidean coordinates).
GridFunction gaussian_bump(const GridSpec& spec, double width);

/// exp(kappa sum_d (cos(k (x_d - c_d)) - 1)) with k = pi / L and kappa = 1 / (k width)^2:
/// a Gaussian of the given width near its seeded center that is smooth across
/// the periodic seam, so its Fourier coefficients decay faster than
/// exponentially. Torus grids only (ConfigError otherwise).
GridFunction periodic_bump(const GridSpec& spec, double width, std::uint64_t seed);

/// Seeded standard-normal values at every node.
GridFunction random_normal(const GridSpec& spec, std::uint64_t seed);

}  // namespace nilfrac
