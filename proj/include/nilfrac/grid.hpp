#pragma once

#include <array>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "nilfrac/group.hpp"

namespace nilfrac {

enum class GridMode { kHeisenberg, kEuclideanBox, kEuclideanTorus };

std::string_view to_string(GridMode mode);
GridMode parse_grid_mode(std::string_view text);

/// Uniform discretization of [-L, L]^dims.
///
/// Box modes (heisenberg, euclidean_box) use n odd nodes per axis including
/// both endpoints, h = 2L / (n - 1), and drop everything outside (Dirichlet).
/// The torus identifies -L with L, so it keeps n nodes with h = 2L / n and n
/// must be even. In every mode node i sits at i * h - L and the origin is a
/// node. Flat indices run with the last axis (x3) fastest.
struct GridSpec {
  int dims = 1;
  int n = 3;
  double L = 1.0;
  GridMode mode = GridMode::kEuclideanBox;

  double spacing() const noexcept {
    return mode == GridMode::kEuclideanTorus ? 2.0 * L / n : 2.0 * L / (n - 1);
  }
  /// h^dims, the Haar (Lebesgue) weight of one node.
  double cell_volume() const noexcept;
  int node_count() const noexcept;
  int origin_index() const noexcept { return n / 2; }
  bool periodic() const noexcept { return mode == GridMode::kEuclideanTorus; }
  double coordinate(int i) const noexcept { return i * spacing() - L; }

  /// Throws ConfigError when the spec is unusable.
  void validate() const;

  friend bool operator==(const GridSpec&, const GridSpec&) = default;
};

using MultiIndex = std::array<int, 3>;

MultiIndex unravel(const GridSpec& spec, int flat) noexcept;
int ravel(const GridSpec& spec, const MultiIndex& idx) noexcept;

/// Node coordinates in flat-index order; unused axes are 0.
std::vector<std::array<double, 3>> make_grid(const GridSpec& spec);

/// Flat index of the node at the group identity.
int origin_node(const GridSpec& spec) noexcept;

/// Heisenberg point of a node (euclidean modes pad missing axes with 0).
GroupPoint node_point(const GridSpec& spec, int flat) noexcept;

/// Real samples on a grid.
struct GridFunction {
  GridSpec spec;
  Eigen::VectorXd values;

  GridFunction() = default;
  explicit GridFunction(const GridSpec& s);
  GridFunction(const GridSpec& s, Eigen::VectorXd v);

  /// Samples f at every node.
  template <class F>
  static GridFunction sample(const GridSpec& s, F&& f) {
    GridFunction out(s);
    const auto nodes = make_grid(s);
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      out.values[static_cast<Eigen::Index>(i)] = f(nodes[i]);
    }
    return out;
  }

  /// Discrete delta at `node` scaled by h^{-dims}, so its integral is 1.
  static GridFunction delta(const GridSpec& s, int node);
};

void require_same_spec(const GridSpec& a, const GridSpec& b, std::string_view where);

/// Plain Riemann sum h^dims * sum(values).
double integral(const GridFunction& f);

/// Haar-weighted inner product.
double inner(const GridFunction& f, const GridFunction& g);

/// Haar-weighted discrete L^p norm for p in {1, 2, inf}; other p throw ConfigError.
double lp_norm(const GridFunction& f, double p);

/// True when the node is at least `margin` nodes away from every box face.
/// On the torus every node is interior.
bool is_interior(const GridSpec& spec, int flat, int margin = 1) noexcept;

}  // namespace nilfrac
