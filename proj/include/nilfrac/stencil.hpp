#pragma once

#include <functional>
#include <ostream>
#include <span>
#include <string_view>
#include <vector>

#include <Eigen/SparseCore>

#include "nilfrac/grid.hpp"

namespace nilfrac {

// Left-invariant fields of the Heisenberg group
//   X1 = d/dx1 - (x2/2) d/dx3,  X2 = d/dx2 + (x1/2) d/dx3,  T = d/dx3,
// plus the Euclidean partials used by the torus / box controls.
enum class FieldKind { kX1, kX2, kT, kPartial0, kPartial1, kPartial2 };
enum class Scheme { kCentered, kForward };

std::string_view to_string(FieldKind kind);
FieldKind parse_field_kind(std::string_view text);

/// Homogeneity degree under dilations: 1 for X1, X2 and the partials, 2 for T.
int homogeneity_degree(FieldKind kind) noexcept;

using SparseMatrix = Eigen::SparseMatrix<double>;

/// Sparse difference matrix of one vector field.
///
/// Centered matrices are N x N and antisymmetric away from the boundary.
/// Forward matrices have one row per forward pair (i, i + e) that touches the
/// grid, including pairs whose base sits one step outside the box; on the
/// torus that is exactly N rows, on a box it is more. The variable
/// coefficient (-x2/2 or x1/2) is taken at the base node of the pair.
struct VectorFieldMatrix {
  FieldKind kind = FieldKind::kPartial0;
  Scheme scheme = Scheme::kCentered;
  SparseMatrix matrix;
  GridSpec spec;
};

/// Throws ConfigError when kind and spec.mode do not fit together.
VectorFieldMatrix build_vector_field(FieldKind kind, Scheme scheme, const GridSpec& spec);

/// X^I f = X_{I[0]} X_{I[1]} ... X_{I[last]} f with centered fields; empty I is the identity.
GridFunction apply_multi_index(std::span<const FieldKind> multi_index, const GridFunction& f);

/// Centered-difference value of the field applied to a closure at an arbitrary point.
double apply_field_at(FieldKind kind, const std::function<double(const GroupPoint&)>& f,
                      const GroupPoint& x, double step);

/// sup over interior nodes of |X(f o delta_alpha) - alpha^deg (X f) o delta_alpha|,
/// divided by max(1, sup |alpha^deg (X f) o delta_alpha|). `degree` defaults to
/// homogeneity_degree(kind); passing a wrong one is the negative control.
double check_homogeneity(FieldKind kind, const std::function<double(const GroupPoint&)>& f,
                         double alpha, const GridSpec& spec, int degree = -1);

enum class OperatorKind { kJ1, kJ3, kEuclid };

std::string_view to_string(OperatorKind kind);
OperatorKind parse_operator_kind(std::string_view text);

/// Symmetric positive-semidefinite matrix realizing the positive operator
/// J = -sum_j X_j^2 with homogeneous Dirichlet data (periodic on the torus).
struct DiscreteOperator {
  OperatorKind kind = OperatorKind::kEuclid;
  SparseMatrix matrix;
  std::vector<VectorFieldMatrix> fields_used;
  GridSpec spec;
};

/// A = sum_j B_j^T B_j over forward-scheme fields: J1 uses X1, X2; J3 adds T;
/// euclid uses every partial. A is bitwise symmetric.
DiscreteOperator assemble_operator(OperatorKind kind, const GridSpec& spec);

GridFunction operator_apply(const DiscreteOperator& op, const GridFunction& f);

/// Lower triangle in MatrixMarket coordinate format, 1-indexed, 17 significant digits.
void write_matrix_market(std::ostream& os, const SparseMatrix& symmetric);

}  // namespace nilfrac
