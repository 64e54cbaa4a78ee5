#include "nilfrac/quadrature.hpp"

#include <cmath>
#include <string>

#include "nilfrac/errors.hpp"
#include "nilfrac/io.hpp"

namespace nilfrac {
namespace {

// Moves away from the peak in direction `dir` until the drop is exceeded,
// then bisects the crossing down to a 1e-3 bracket.
double tail_end(const std::function<double(double)>& log_f, double peak, double top, double drop,
                double dir) {
  double inside = 0.0;
  double step = 1.0;
  while (log_f(peak + dir * step) > top - drop) {
    inside = step;
    step *= 2.0;
    if (step > 1e6) break;
  }
  double outside = step;
  while (outside - inside > 1e-3) {
    const double mid = 0.5 * (inside + outside);
    if (log_f(peak + dir * mid) > top - drop) {
      inside = mid;
    } else {
      outside = mid;
    }
  }
  return peak + dir * outside;
}

}  // namespace

LogRange concave_tail_range(const std::function<double(double)>& log_f, double peak, double drop) {
  const double top = log_f(peak);
  return {tail_end(log_f, peak, top, drop, -1.0), tail_end(log_f, peak, top, drop, +1.0)};
}

QuadratureResult integrate_log_concave(const std::function<double(double)>& log_f, double peak,
                                       const QuadratureOptions& opts) {
  const double top = log_f(peak);
  const auto range = concave_tail_range(log_f, peak, opts.tail_drop);
  auto scaled = [&](double sigma) { return std::exp(log_f(sigma) - top); };

  int intervals = std::max(opts.initial_nodes - 1, 2);
  double step = (range.hi - range.lo) / intervals;
  double sum = 0.5 * (scaled(range.lo) + scaled(range.hi));
  for (int j = 1; j < intervals; ++j) sum += scaled(range.lo + j * step);
  double estimate = sum * step;

  QuadratureResult result;
  while (true) {
    // Nested refinement: only the midpoints are new.
    double mids = 0.0;
    for (int j = 0; j < intervals; ++j) mids += scaled(range.lo + (j + 0.5) * step);
    sum += mids;
    intervals *= 2;
    step *= 0.5;
    const double refined = sum * step;
    const double change = std::abs(refined - estimate) / std::max(std::abs(refined), 1e-300);
    estimate = refined;
    result.nodes = intervals + 1;
    result.error_estimate = change;
    if (change < opts.tolerance) break;
    if (intervals + 1 > opts.max_nodes) {
      throw AccuracyError("quadrature did not converge; last relative change " +
                              format_double(change),
                          change);
    }
  }
  result.value = estimate * std::exp(top);
  return result;
}

}  // namespace nilfrac
