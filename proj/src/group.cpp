#include "nilfrac/group.hpp"

#include <cmath>

#include "nilfrac/errors.hpp"

namespace nilfrac {

GroupPoint group_mul(const GroupPoint& x, const GroupPoint& y) noexcept {
  return {x.x1 + y.x1, x.x2 + y.x2,
          x.x3 + y.x3 + 0.5 * (x.x1 * y.x2 - y.x1 * x.x2)};
}

GroupPoint group_inverse(const GroupPoint& x) noexcept {
  return {-x.x1, -x.x2, -x.x3};
}

GroupPoint dilate(double alpha, const GroupPoint& x) {
  if (!(alpha > 0.0)) {
    throw DomainError("dilate: alpha must be > 0");
  }
  return {alpha * x.x1, alpha * x.x2, alpha * alpha * x.x3};
}

double homogeneous_norm(const GroupPoint& x) noexcept {
  const double rho2 = x.x1 * x.x1 + x.x2 * x.x2;
  // sqrt(sqrt(.)) keeps the (3,4,0) -> 5 case exact.
  return std::sqrt(std::sqrt(rho2 * rho2 + 16.0 * x.x3 * x.x3));
}

double group_distance(const GroupPoint& x, const GroupPoint& y) noexcept {
  return homogeneous_norm(group_mul(group_inverse(y), x));
}

}  // namespace nilfrac
