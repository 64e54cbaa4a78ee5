#pragma once

#include <functional>

namespace nilfrac {

struct QuadratureOptions {
  /// Trapezoid nodes of the first pass; doubled (nested) until converged.
  int initial_nodes = 400;
  /// Stop when successive passes differ by less than this, relative.
  double tolerance = 1e-10;
  int max_nodes = 1 << 17;
  /// Integration range ends where the log-integrand has dropped this far
  /// below its peak (40 natural-log units is about 4e-18).
  double tail_drop = 40.0;
};

struct QuadratureResult {
  double value = 0.0;
  double error_estimate = 0.0;  // relative difference of the last two passes
  int nodes = 0;
};

/// Range [lo, hi] around `peak` outside of which the concave log-integrand
/// `log_f` sits more than `drop` below log_f(peak).
struct LogRange {
  double lo;
  double hi;
};
LogRange concave_tail_range(const std::function<double(double)>& log_f, double peak, double drop);

/// integral over the real line of exp(log_f(sigma)) d sigma for a concave
/// log_f with maximum at `peak`, by the trapezoid rule on the tail-trimmed
/// range. Throws AccuracyError when max_nodes is reached first.
QuadratureResult integrate_log_concave(const std::function<double(double)>& log_f, double peak,
                                       const QuadratureOptions& opts = {});

}  // namespace nilfrac
