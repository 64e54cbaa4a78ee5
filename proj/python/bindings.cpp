#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "nilfrac/errors.hpp"
#include "nilfrac/experiment.hpp"
#include "nilfrac/extension.hpp"
#include "nilfrac/fourier.hpp"
#include "nilfrac/group.hpp"
#include "nilfrac/spectral.hpp"

namespace py = pybind11;
using namespace nilfrac;

namespace {

GridSpec make_spec(const std::string& mode, int dims, int n, double L) {
  GridSpec spec{dims, n, L, parse_grid_mode(mode)};
  spec.validate();
  return spec;
}

GroupPoint point(const std::array<double, 3>& x) { return {x[0], x[1], x[2]}; }
std::array<double, 3> coords(const GroupPoint& p) { return {p.x1, p.x2, p.x3}; }

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Fractional powers of sub-Laplacians on a discretized Heisenberg group";

  static py::exception<Error> base(m, "NilfracError", PyExc_RuntimeError);
  py::register_exception<ConfigError>(m, "ConfigError", base.ptr());
  py::register_exception<DomainError>(m, "DomainError", base.ptr());
  py::register_exception<ShapeError>(m, "ShapeError", base.ptr());
  py::register_exception<CapacityError>(m, "CapacityError", base.ptr());
  py::register_exception<EvaluationError>(m, "EvaluationError", base.ptr());
  py::register_exception<AccuracyError>(m, "AccuracyError", base.ptr());

  m.def("group_mul", [](const std::array<double, 3>& x, const std::array<double, 3>& y) {
    return coords(group_mul(point(x), point(y)));
  });
  m.def("group_inverse", [](const std::array<double, 3>& x) { return coords(group_inverse(point(x))); });
  m.def("dilate", [](double a, const std::array<double, 3>& x) { return coords(dilate(a, point(x))); });
  m.def("homogeneous_norm", [](const std::array<double, 3>& x) { return homogeneous_norm(point(x)); });

  m.def(
      "grid_coordinates",
      [](const std::string& mode, int dims, int n, double L) {
        const auto nodes = make_grid(make_spec(mode, dims, n, L));
        Eigen::MatrixXd out(static_cast<Eigen::Index>(nodes.size()), 3);
        for (std::size_t i = 0; i < nodes.size(); ++i) {
          for (int d = 0; d < 3; ++d) out(static_cast<Eigen::Index>(i), d) = nodes[i][static_cast<std::size_t>(d)];
        }
        return out;
      },
      py::arg("mode"), py::arg("dims"), py::arg("n"), py::arg("L"));

  m.def(
      "operator_matrix",
      [](const std::string& mode, int dims, int n, double L, const std::string& op) {
        return Eigen::SparseMatrix<double>(assemble_operator(parse_operator_kind(op), make_spec(mode, dims, n, L)).matrix);
      },
      py::arg("mode"), py::arg("dims"), py::arg("n"), py::arg("L"), py::arg("op"));

  m.def(
      "spectrum",
      [](const std::string& mode, int dims, int n, double L, const std::string& op) {
        return spectral_decompose(assemble_operator(parse_operator_kind(op), make_spec(mode, dims, n, L))).lambda();
      },
      py::arg("mode"), py::arg("dims"), py::arg("n"), py::arg("L"), py::arg("op"));

  m.def(
      "fractional_power",
      [](const std::string& mode, int dims, int n, double L, const std::string& op, double s,
         const Eigen::VectorXd& f) {
        const auto spec = make_spec(mode, dims, n, L);
        if (f.size() != spec.node_count()) throw ShapeError("fractional_power: f has the wrong length");
        const auto dec = spectral_decompose(assemble_operator(parse_operator_kind(op), spec));
        return fractional_power(dec, s, GridFunction(spec, f)).values;
      },
      py::arg("mode"), py::arg("dims"), py::arg("n"), py::arg("L"), py::arg("op"), py::arg("s"),
      py::arg("f"));

  m.def(
      "fourier_fractional",
      [](int dims, int n, double L, double s, const Eigen::VectorXd& f) {
        const auto spec = make_spec("euclidean_torus", dims, n, L);
        if (f.size() != spec.node_count()) throw ShapeError("fourier_fractional: f has the wrong length");
        return fourier_fractional(GridFunction(spec, f), s).values;
      },
      py::arg("dims"), py::arg("n"), py::arg("L"), py::arg("s"), py::arg("f"));

  m.def("extension_multiplier", [](double s, double t, double lambda) {
    return scalar_extension_multiplier(s, t, lambda);
  }, py::arg("s"), py::arg("t"), py::arg("lam"));
  m.def("extension_constant", &extension_constant, py::arg("s"));

  m.def(
      "run",
      [](const std::string& config_text, const std::string& out) {
        auto cfg = parse_config_text(config_text);
        if (!out.empty()) cfg.out = out;
        cfg.validate();
        return render_json(run(cfg));
      },
      py::arg("config"), py::arg("out") = "",
      "Runs one experiment from key = value text and returns the results.json body.");
}
