#pragma once

#include "nilfrac/grid.hpp"

namespace nilfrac {

/// Discrete group convolution (f * g)(x) = sum_y h^dims f(y) g(y^{-1} . x).
///
/// Heisenberg mode evaluates y^{-1} . x with the exact group law. The first
/// two coordinates of the offset land on the lattice; the third is shifted by
/// (x1 y2 - y1 x2) / 2 and is read off g by linear interpolation along x3
/// (the trilinear weights in x1, x2 are 0/1). Outside the box g is zero.
/// Euclidean box mode is the zero-padded convolution, torus mode the
/// periodic one. Throws ShapeError for mismatched specs.
GridFunction group_convolve(const GridFunction& f, const GridFunction& g);

}  // namespace nilfrac
