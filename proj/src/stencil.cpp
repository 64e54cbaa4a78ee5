#include "nilfrac/stencil.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "nilfrac/errors.hpp"
#include "nilfrac/io.hpp"

namespace nilfrac {
namespace {

struct FieldTerm {
  int axis;
  // Coefficient as a function of the base point (x1, x2, x3).
  double (*coefficient)(const double* x);
};

double one(const double*) { return 1.0; }
double minus_half_x2(const double* x) { return -0.5 * x[1]; }
double half_x1(const double* x) { return 0.5 * x[0]; }

std::vector<FieldTerm> field_terms(FieldKind kind) {
  switch (kind) {
    case FieldKind::kX1:
      return {{0, one}, {2, minus_half_x2}};
    case FieldKind::kX2:
      return {{1, one}, {2, half_x1}};
    case FieldKind::kT:
      return {{2, one}};
    case FieldKind::kPartial0:
      return {{0, one}};
    case FieldKind::kPartial1:
      return {{1, one}};
    case FieldKind::kPartial2:
      return {{2, one}};
  }
  return {};
}

bool is_heisenberg_field(FieldKind kind) {
  return kind == FieldKind::kX1 || kind == FieldKind::kX2 || kind == FieldKind::kT;
}

void check_compatible(FieldKind kind, const GridSpec& spec) {
  spec.validate();
  const bool heis = spec.mode == GridMode::kHeisenberg;
  if (is_heisenberg_field(kind) != heis) {
    throw ConfigError("field " + std::string(to_string(kind)) + " is not defined in " +
                      std::string(to_string(spec.mode)) + " mode");
  }
  if (!heis) {
    const int axis = static_cast<int>(kind) - static_cast<int>(FieldKind::kPartial0);
    if (axis >= spec.dims) {
      throw ConfigError("field " + std::string(to_string(kind)) + " exceeds grid dims");
    }
  }
}

// Maps an axis index to [0, n) (torus) or returns -1 when outside the box.
int wrap_or_drop(const GridSpec& spec, int i) {
  if (spec.periodic()) return ((i % spec.n) + spec.n) % spec.n;
  return (i >= 0 && i < spec.n) ? i : -1;
}

int shifted_node(const GridSpec& spec, MultiIndex idx, int axis, int step) {
  for (int d = 0; d < spec.dims; ++d) {
    const auto u = static_cast<std::size_t>(d);
    const int v = wrap_or_drop(spec, idx[u] + (d == axis ? step : 0));
    if (v < 0) return -1;
    idx[u] = v;
  }
  return ravel(spec, idx);
}

void base_coordinates(const GridSpec& spec, const MultiIndex& idx, double* x) {
  x[0] = x[1] = x[2] = 0.0;
  for (int d = 0; d < spec.dims; ++d) x[d] = spec.coordinate(idx[static_cast<std::size_t>(d)]);
}

SparseMatrix centered_matrix(FieldKind kind, const GridSpec& spec) {
  const auto terms = field_terms(kind);
  const int total = spec.node_count();
  const double inv2h = 1.0 / (2.0 * spec.spacing());
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(static_cast<std::size_t>(total) * terms.size() * 2);
  double x[3];
  for (int row = 0; row < total; ++row) {
    const auto idx = unravel(spec, row);
    base_coordinates(spec, idx, x);
    for (const auto& term : terms) {
      const double c = term.coefficient(x) * inv2h;
      if (c == 0.0) continue;
      const int plus = shifted_node(spec, idx, term.axis, +1);
      const int minus = shifted_node(spec, idx, term.axis, -1);
      if (plus >= 0) trip.emplace_back(row, plus, c);
      if (minus >= 0) trip.emplace_back(row, minus, -c);
    }
  }
  SparseMatrix m(total, total);
  m.setFromTriplets(trip.begin(), trip.end());
  return m;
}

SparseMatrix forward_matrix(FieldKind kind, const GridSpec& spec) {
  const auto terms = field_terms(kind);
  const int total = spec.node_count();
  const double invh = 1.0 / spec.spacing();
  const int lo = spec.periodic() ? 0 : -1;
  const int span = spec.n - lo;
  int bases = 1;
  for (int d = 0; d < spec.dims; ++d) bases *= span;

  std::vector<Eigen::Triplet<double>> trip;
  int rows = 0;
  double x[3];
  std::vector<std::pair<int, double>> entries;
  for (int b = 0; b < bases; ++b) {
    MultiIndex idx{0, 0, 0};
    int rest = b;
    for (int d = spec.dims - 1; d >= 0; --d) {
      idx[static_cast<std::size_t>(d)] = rest % span + lo;
      rest /= span;
    }
    base_coordinates(spec, idx, x);
    entries.clear();
    for (const auto& term : terms) {
      const double c = term.coefficient(x) * invh;
      if (c == 0.0) continue;
      const int head = shifted_node(spec, idx, term.axis, +1);
      const int tail = shifted_node(spec, idx, term.axis, 0);
      if (head >= 0) entries.emplace_back(head, c);
      if (tail >= 0) entries.emplace_back(tail, -c);
    }
    if (entries.empty()) continue;
    for (const auto& [col, v] : entries) trip.emplace_back(rows, col, v);
    ++rows;
  }
  SparseMatrix m(rows, total);
  m.setFromTriplets(trip.begin(), trip.end());
  return m;
}

}  // namespace

std::string_view to_string(FieldKind kind) {
  switch (kind) {
    case FieldKind::kX1:
      return "X1";
    case FieldKind::kX2:
      return "X2";
    case FieldKind::kT:
      return "T";
    case FieldKind::kPartial0:
      return "partial0";
    case FieldKind::kPartial1:
      return "partial1";
    case FieldKind::kPartial2:
      return "partial2";
  }
  return "unknown";
}

FieldKind parse_field_kind(std::string_view text) {
  for (auto k : {FieldKind::kX1, FieldKind::kX2, FieldKind::kT, FieldKind::kPartial0,
                 FieldKind::kPartial1, FieldKind::kPartial2}) {
    if (to_string(k) == text) return k;
  }
  throw ConfigError("unknown vector field '" + std::string(text) + "'");
}

int homogeneity_degree(FieldKind kind) noexcept { return kind == FieldKind::kT ? 2 : 1; }

VectorFieldMatrix build_vector_field(FieldKind kind, Scheme scheme, const GridSpec& spec) {
  check_compatible(kind, spec);
  VectorFieldMatrix out;
  out.kind = kind;
  out.scheme = scheme;
  out.spec = spec;
  out.matrix = scheme == Scheme::kCentered ? centered_matrix(kind, spec) : forward_matrix(kind, spec);
  return out;
}

GridFunction apply_multi_index(std::span<const FieldKind> multi_index, const GridFunction& f) {
  GridFunction out = f;
  for (auto it = multi_index.rbegin(); it != multi_index.rend(); ++it) {
    const auto field = build_vector_field(*it, Scheme::kCentered, f.spec);
    out.values = field.matrix * out.values;
  }
  return out;
}

double apply_field_at(FieldKind kind, const std::function<double(const GroupPoint&)>& f,
                      const GroupPoint& x, double step) {
  const double base[3] = {x.x1, x.x2, x.x3};
  double acc = 0.0;
  for (const auto& term : field_terms(kind)) {
    double p[3] = {base[0], base[1], base[2]};
    double m[3] = {base[0], base[1], base[2]};
    p[term.axis] += step;
    m[term.axis] -= step;
    acc += term.coefficient(base) * (f({p[0], p[1], p[2]}) - f({m[0], m[1], m[2]})) / (2.0 * step);
  }
  return acc;
}

double check_homogeneity(FieldKind kind, const std::function<double(const GroupPoint&)>& f,
                         double alpha, const GridSpec& spec, int degree) {
  if (degree < 0) degree = homogeneity_degree(kind);
  const auto field = build_vector_field(kind, Scheme::kCentered, spec);
  const auto dilated = GridFunction::sample(spec, [&](const std::array<double, 3>& p) {
    return f(dilate(alpha, {p[0], p[1], p[2]}));
  });
  const Eigen::VectorXd lhs = field.matrix * dilated.values;
  const double factor = std::pow(alpha, degree);
  const double h = spec.spacing();
  double worst = 0.0;
  double scale = 1.0;
  for (int i = 0; i < spec.node_count(); ++i) {
    if (!is_interior(spec, i)) continue;
    const double rhs = factor * apply_field_at(kind, f, dilate(alpha, node_point(spec, i)), h);
    worst = std::max(worst, std::abs(lhs[i] - rhs));
    scale = std::max(scale, std::abs(rhs));
  }
  return worst / scale;
}

std::string_view to_string(OperatorKind kind) {
  switch (kind) {
    case OperatorKind::kJ1:
      return "j1";
    case OperatorKind::kJ3:
      return "j3";
    case OperatorKind::kEuclid:
      return "euclid";
  }
  return "unknown";
}

OperatorKind parse_operator_kind(std::string_view text) {
  if (text == "j1") return OperatorKind::kJ1;
  if (text == "j3") return OperatorKind::kJ3;
  if (text == "euclid") return OperatorKind::kEuclid;
  throw ConfigError("unknown operator '" + std::string(text) + "'");
}

DiscreteOperator assemble_operator(OperatorKind kind, const GridSpec& spec) {
  spec.validate();
  std::vector<FieldKind> fields;
  switch (kind) {
    case OperatorKind::kJ1:
      fields = {FieldKind::kX1, FieldKind::kX2};
      break;
    case OperatorKind::kJ3:
      fields = {FieldKind::kX1, FieldKind::kX2, FieldKind::kT};
      break;
    case OperatorKind::kEuclid:
      if (spec.mode == GridMode::kHeisenberg) {
        throw ConfigError("euclid operator needs a euclidean grid mode");
      }
      for (int d = 0; d < spec.dims; ++d) {
        fields.push_back(static_cast<FieldKind>(static_cast<int>(FieldKind::kPartial0) + d));
      }
      break;
  }
  if (kind != OperatorKind::kEuclid && spec.mode != GridMode::kHeisenberg) {
    throw ConfigError("j1/j3 need heisenberg grid mode");
  }

  DiscreteOperator op;
  op.kind = kind;
  op.spec = spec;
  const int total = spec.node_count();
  SparseMatrix acc(total, total);
  for (auto f : fields) {
    op.fields_used.push_back(build_vector_field(f, Scheme::kForward, spec));
    const auto& b = op.fields_used.back().matrix;
    SparseMatrix btb = SparseMatrix(b.transpose()) * b;
    acc += btb;
  }
  SparseMatrix transposed = acc.transpose();
  op.matrix = 0.5 * (acc + transposed);
  op.matrix.prune(0.0);
  op.matrix.makeCompressed();
  return op;
}

GridFunction operator_apply(const DiscreteOperator& op, const GridFunction& f) {
  require_same_spec(op.spec, f.spec, "operator_apply");
  return GridFunction(f.spec, op.matrix * f.values);
}

void write_matrix_market(std::ostream& os, const SparseMatrix& symmetric) {
  long nnz = 0;
  for (int k = 0; k < symmetric.outerSize(); ++k) {
    for (SparseMatrix::InnerIterator it(symmetric, k); it; ++it) {
      if (it.row() >= it.col()) ++nnz;
    }
  }
  os << "%%MatrixMarket matrix coordinate real symmetric\n";
  os << symmetric.rows() << ' ' << symmetric.cols() << ' ' << nnz << '\n';
  for (int k = 0; k < symmetric.outerSize(); ++k) {
    for (SparseMatrix::InnerIterator it(symmetric, k); it; ++it) {
      if (it.row() >= it.col()) {
        os << it.row() + 1 << ' ' << it.col() + 1 << ' ' << format_double(it.value()) << '\n';
      }
    }
  }
}

}  // namespace nilfrac
