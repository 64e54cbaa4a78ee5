#include "nilfrac/convolution.hpp"

#include <cmath>

namespace nilfrac {
namespace {

GridFunction convolve_heisenberg(const GridFunction& f, const GridFunction& g) {
  const auto& spec = f.spec;
  const int n = spec.n;
  const int c = spec.origin_index();
  const double h = spec.spacing();
  const double w = spec.cell_volume();
  GridFunction out(spec);
  auto at = [&](int i1, int i2, int i3) { return (i1 * n + i2) * n + i3; };

  for (int b1 = 0; b1 < n; ++b1) {
    const double y1 = spec.coordinate(b1);
    for (int b2 = 0; b2 < n; ++b2) {
      const double y2 = spec.coordinate(b2);
      for (int a1 = 0; a1 < n; ++a1) {
        const int k1 = a1 - b1 + c;
        if (k1 < 0 || k1 >= n) continue;
        const double x1 = spec.coordinate(a1);
        for (int a2 = 0; a2 < n; ++a2) {
          const int k2 = a2 - b2 + c;
          if (k2 < 0 || k2 >= n) continue;
          const double x2 = spec.coordinate(a2);
          // Fractional node shift of the x3 offset.
          const double shift = 0.5 * (x1 * y2 - y1 * x2) / h;
          const double base = std::floor(shift);
          const double theta = shift - base;
          const int kshift = static_cast<int>(base);
          for (int b3 = 0; b3 < n; ++b3) {
            const double fy = f.values[at(b1, b2, b3)];
            if (fy == 0.0) continue;
            for (int a3 = 0; a3 < n; ++a3) {
              const int k3 = a3 - b3 + c + kshift;
              double gv = 0.0;
              if (k3 >= 0 && k3 < n) gv += (1.0 - theta) * g.values[at(k1, k2, k3)];
              if (theta != 0.0 && k3 + 1 >= 0 && k3 + 1 < n) {
                gv += theta * g.values[at(k1, k2, k3 + 1)];
              }
              out.values[at(a1, a2, a3)] += w * fy * gv;
            }
          }
        }
      }
    }
  }
  return out;
}

GridFunction convolve_euclidean(const GridFunction& f, const GridFunction& g) {
  const auto& spec = f.spec;
  const int n = spec.n;
  const int c = spec.origin_index();
  const int total = spec.node_count();
  const double w = spec.cell_volume();
  GridFunction out(spec);
  for (int y = 0; y < total; ++y) {
    const double fy = f.values[y];
    if (fy == 0.0) continue;
    const auto by = unravel(spec, y);
    for (int x = 0; x < total; ++x) {
      const auto ax = unravel(spec, x);
      MultiIndex k{0, 0, 0};
      bool inside = true;
      for (int d = 0; d < spec.dims; ++d) {
        const auto u = static_cast<std::size_t>(d);
        int v = ax[u] - by[u] + c;
        if (spec.periodic()) {
          v = ((v % n) + n) % n;
        } else if (v < 0 || v >= n) {
          inside = false;
          break;
        }
        k[u] = v;
      }
      if (inside) out.values[x] += w * fy * g.values[ravel(spec, k)];
    }
  }
  return out;
}

}  // namespace

GridFunction group_convolve(const GridFunction& f, const GridFunction& g) {
  require_same_spec(f.spec, g.spec, "group_convolve");
  f.spec.validate();
  if (f.spec.mode == GridMode::kHeisenberg) return convolve_heisenberg(f, g);
  return convolve_euclidean(f, g);
}

}  // namespace nilfrac
