#include "nilfrac/grid.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "nilfrac/errors.hpp"

namespace nilfrac {

std::string_view to_string(GridMode mode) {
  switch (mode) {
    case GridMode::kHeisenberg:
      return "heisenberg";
    case GridMode::kEuclideanBox:
      return "euclidean_box";
    case GridMode::kEuclideanTorus:
      return "euclidean_torus";
  }
  return "unknown";
}

GridMode parse_grid_mode(std::string_view text) {
  if (text == "heisenberg") return GridMode::kHeisenberg;
  if (text == "euclidean_box") return GridMode::kEuclideanBox;
  if (text == "euclidean_torus") return GridMode::kEuclideanTorus;
  throw ConfigError("unknown grid mode '" + std::string(text) + "'");
}

double GridSpec::cell_volume() const noexcept {
  return std::pow(spacing(), dims);
}

int GridSpec::node_count() const noexcept {
  int total = 1;
  for (int d = 0; d < dims; ++d) total *= n;
  return total;
}

void GridSpec::validate() const {
  if (dims < 1 || dims > 3) {
    throw ConfigError("grid: dims must be 1, 2 or 3");
  }
  if (!(L > 0.0) || !std::isfinite(L)) {
    throw ConfigError("grid: extent L must be a positive finite number");
  }
  if (mode == GridMode::kHeisenberg && dims != 3) {
    throw ConfigError("grid: heisenberg mode requires dims = 3");
  }
  if (periodic()) {
    if (n < 4 || n % 2 != 0) {
      throw ConfigError("grid: torus needs an even n_per_axis >= 4 (origin must be a node)");
    }
  } else if (n < 3 || n % 2 == 0) {
    throw ConfigError("grid: n_per_axis must be odd and >= 3 (origin must be a node)");
  }
}

MultiIndex unravel(const GridSpec& spec, int flat) noexcept {
  MultiIndex idx{0, 0, 0};
  for (int d = spec.dims - 1; d >= 0; --d) {
    idx[static_cast<std::size_t>(d)] = flat % spec.n;
    flat /= spec.n;
  }
  return idx;
}

int ravel(const GridSpec& spec, const MultiIndex& idx) noexcept {
  int flat = 0;
  for (int d = 0; d < spec.dims; ++d) {
    flat = flat * spec.n + idx[static_cast<std::size_t>(d)];
  }
  return flat;
}

std::vector<std::array<double, 3>> make_grid(const GridSpec& spec) {
  spec.validate();
  const int total = spec.node_count();
  std::vector<std::array<double, 3>> nodes(static_cast<std::size_t>(total));
  for (int k = 0; k < total; ++k) {
    const auto idx = unravel(spec, k);
    auto& node = nodes[static_cast<std::size_t>(k)];
    node = {0.0, 0.0, 0.0};
    for (int d = 0; d < spec.dims; ++d) {
      node[static_cast<std::size_t>(d)] = spec.coordinate(idx[static_cast<std::size_t>(d)]);
    }
  }
  return nodes;
}

int origin_node(const GridSpec& spec) noexcept {
  const int c = spec.origin_index();
  return ravel(spec, {c, c, c});
}

GroupPoint node_point(const GridSpec& spec, int flat) noexcept {
  const auto idx = unravel(spec, flat);
  double c[3] = {0.0, 0.0, 0.0};
  for (int d = 0; d < spec.dims; ++d) c[d] = spec.coordinate(idx[static_cast<std::size_t>(d)]);
  return {c[0], c[1], c[2]};
}

GridFunction::GridFunction(const GridSpec& s)
    : spec(s), values(Eigen::VectorXd::Zero(s.node_count())) {}

GridFunction::GridFunction(const GridSpec& s, Eigen::VectorXd v)
    : spec(s), values(std::move(v)) {
  if (values.size() != s.node_count()) {
    throw ShapeError("GridFunction: value count does not match the grid");
  }
}

GridFunction GridFunction::delta(const GridSpec& s, int node) {
  GridFunction out(s);
  if (node < 0 || node >= s.node_count()) {
    throw ShapeError("GridFunction::delta: node index out of range");
  }
  out.values[node] = 1.0 / s.cell_volume();
  return out;
}

void require_same_spec(const GridSpec& a, const GridSpec& b, std::string_view where) {
  if (!(a == b)) {
    throw ShapeError(std::string(where) + ": grid specs differ");
  }
}

double integral(const GridFunction& f) {
  return f.spec.cell_volume() * f.values.sum();
}

double inner(const GridFunction& f, const GridFunction& g) {
  require_same_spec(f.spec, g.spec, "inner");
  return f.spec.cell_volume() * f.values.dot(g.values);
}

double lp_norm(const GridFunction& f, double p) {
  if (std::isinf(p) && p > 0) {
    return f.values.size() == 0 ? 0.0 : f.values.cwiseAbs().maxCoeff();
  }
  const double w = f.spec.cell_volume();
  if (p == 1.0) return w * f.values.cwiseAbs().sum();
  if (p == 2.0) return std::sqrt(w * f.values.squaredNorm());
  throw ConfigError("lp_norm: p must be 1, 2 or inf");
}

bool is_interior(const GridSpec& spec, int flat, int margin) noexcept {
  if (spec.periodic()) return true;
  const auto idx = unravel(spec, flat);
  for (int d = 0; d < spec.dims; ++d) {
    const int i = idx[static_cast<std::size_t>(d)];
    if (i < margin || i > spec.n - 1 - margin) return false;
  }
  return true;
}

}  // namespace nilfrac
