#pragma once

// Heisenberg group H = (R^3, ., delta) with the law
//   x . y = (x1 + y1, x2 + y2, x3 + y3 + (x1 y2 - y1 x2) / 2).

namespace nilfrac {

struct GroupPoint {
  double x1 = 0.0;
  double x2 = 0.0;
  double x3 = 0.0;

  friend bool operator==(const GroupPoint&, const GroupPoint&) = default;
};

inline constexpr GroupPoint kIdentity{0.0, 0.0, 0.0};

GroupPoint group_mul(const GroupPoint& x, const GroupPoint& y) noexcept;

/// Coordinate negation; x . x^{-1} = e with no roundoff.
GroupPoint group_inverse(const GroupPoint& x) noexcept;

/// delta_alpha(x) = (alpha x1, alpha x2, alpha^2 x3). Throws DomainError for alpha <= 0.
GroupPoint dilate(double alpha, const GroupPoint& x);

/// ||x|| = ((x1^2 + x2^2)^2 + 16 x3^2)^(1/4), homogeneous of degree 1 under dilate.
double homogeneous_norm(const GroupPoint& x) noexcept;

/// Left-invariant distance ||y^{-1} . x||.
double group_distance(const GroupPoint& x, const GroupPoint& y) noexcept;

}  // namespace nilfrac
