#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "sparsewave/greens.hpp"
#include "sparsewave/potential.hpp"
#include "sparsewave/propagate.hpp"
#include "sparsewave/radial.hpp"
#include "sparsewave/seqbounds.hpp"
#include "sparsewave/sphere.hpp"
#include "sparsewave/wkb.hpp"

namespace py = pybind11;
using namespace spw;

namespace {

// constant shells are enough for the scripting surface; richer layer kinds
// stay on the C++/config side
SparsePotential constant_shells(const std::vector<double>& radii,
                                const std::vector<double>& values) {
  if (radii.size() != values.size())
    throw InvalidInput("constant_shells: radii and values must pair up");
  SparsePotential pot;
  for (std::size_t i = 0; i < radii.size(); ++i)
    pot.layers.push_back(make_constant_layer(int(i), radii[i], values[i]));
  if (!pot.layers.empty()) pot.validate();
  return pot;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "scattering through sparse spherical shells";

  py::register_exception<InvalidInput>(m, "InvalidInput", PyExc_ValueError);

  m.def(
      "free_amplitude_ball",
      [](cplx k) { return free_amplitude_radial(ball_source(), k); },
      py::arg("k"), "far-field amplitude of the unit-ball source at V = 0");

  m.def(
      "radial_amplitude",
      [](const std::vector<double>& radii, const std::vector<double>& values, cplx k) {
        return radial_amplitude_oracle(ball_source(), constant_shells(radii, values), k);
      },
      py::arg("shell_radii"), py::arg("shell_values"), py::arg("k"),
      "amplitude of the ball source behind constant shells, via the radial solver");

  m.def(
      "wkb_exponent",
      [](const std::vector<double>& radii, const std::vector<double>& values, cplx k) {
        return wkb_exponent_symmetric(constant_shells(radii, values), k);
      },
      py::arg("shell_radii"), py::arg("shell_values"), py::arg("k"),
      "exponent of the multiplicative comparison factor for constant shells");

  m.def("o_t_eigenvalue", &o_t_eigenvalue, py::arg("m"), py::arg("t"), py::arg("k"),
        "sphere-operator eigenvalue on the degree-m subspace");
  m.def("parametrix_residual", &parametrix_residual, py::arg("m"), py::arg("t"), py::arg("k"),
        "defect of the heat-flow approximation at radius t");

  m.def(
      "sparseness_ok",
      [](const std::vector<double>& log_radii, double alpha) {
        return validate_sparseness_logs(log_radii, alpha).all_ok();
      },
      py::arg("log_radii"), py::arg("alpha") = 1.5,
      "checks the shell-spacing conditions on ln R_n");

  m.def("prufer_gap_bound", &prufer_gap_bound, py::arg("m"), py::arg("E"), py::arg("r_inner"),
        py::arg("r"), py::arg("f_val"), py::arg("f_deriv"),
        "lower bound on |f|^2 + E^{-1}|f'|^2 across a potential-free gap");

  m.def(
      "absence_margins",
      [](double E, double gamma, double log_R0, double beta, int count) {
        GapSchedule sched;
        sched.log_R0 = log_R0;
        sched.beta = beta;
        sched.count = count;
        const AbsenceVerdict v = eigenvalue_absence_check(E, gamma, sched);
        std::vector<py::tuple> rows;
        for (const auto& cert : v.certificates)
          rows.push_back(py::make_tuple(
              cert.n, (cert.margin.sign < 0 ? "-" : "") + cert.margin.mag.str(),
              cert.contradiction));
        return py::make_tuple(rows, v.contradiction_all, v.margins_increasing);
      },
      py::arg("E"), py::arg("gamma"), py::arg("log_R0") = 120.0, py::arg("beta") = 1.4,
      py::arg("count") = 5,
      "per-gap contradiction margins of the no-eigenvalue chain");

  m.def("poly_exp_max", &poly_exp_max, py::arg("j"), py::arg("eps"),
        "sup of x^j e^{-eps x} over x > 0");
  m.def("affine_iteration_bound", &affine_iteration_bound, py::arg("a"), py::arg("b"),
        py::arg("x0"), "closed-form bound for x_{n+1} = a_n x_n + b_n");
}
