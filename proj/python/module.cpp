#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "brokenline/aux1d.hpp"
#include "brokenline/cli.hpp"
#include "brokenline/fem.hpp"
#include "brokenline/special.hpp"
#include "brokenline/spin_orbit.hpp"
#include "brokenline/variational.hpp"

namespace py = pybind11;
using namespace brokenline;

namespace {
PhysParams P(double tau, double m, double omega) { return make_params(tau, m, omega); }
}  // namespace

PYBIND11_MODULE(_core, mod) {
  mod.doc() = "Dirac operator with a delta-shell interaction supported on a broken line";

  py::register_exception<InvalidParameter>(mod, "InvalidParameter", PyExc_ValueError);
  py::register_exception<ConvergenceFailure>(mod, "ConvergenceFailure", PyExc_RuntimeError);

  py::class_<PhysParams>(mod, "PhysParams")
      .def(py::init(&P), py::arg("tau"), py::arg("m") = 1.0, py::arg("omega") = pi / 4)
      .def_readonly("tau", &PhysParams::tau)
      .def_readonly("m", &PhysParams::m)
      .def_readonly("omega", &PhysParams::omega)
      .def("__repr__", [](const PhysParams& p) {
        return "PhysParams(tau=" + format_double(p.tau) + ", m=" + format_double(p.m) +
               ", omega=" + format_double(p.omega) + ")";
      });

  py::class_<DerivedConstants>(mod, "DerivedConstants")
      .def_readonly("a", &DerivedConstants::a)
      .def_readonly("b", &DerivedConstants::b)
      .def_readonly("eps_tau", &DerivedConstants::eps_tau)
      .def_readonly("kappa0", &DerivedConstants::kappa0)
      .def_readonly("kappa_tau", &DerivedConstants::kappa_tau)
      .def_readonly("c_tau", &DerivedConstants::c_tau);

  mod.def("pauli", &pauli, py::arg("j"));
  mod.def("derived_constants", &derived_constants, py::arg("p"));
  mod.def("m_left", &m_left, py::arg("p"));
  mod.def("m_right", &m_right, py::arg("p"));
  mod.def(
      "transmission_matrix",
      [](const PhysParams& p, const Vec2& nu, bool inverse) { return transmission_matrix(p, nu, inverse).entries; },
      py::arg("p"), py::arg("nu"), py::arg("inverse") = false);

  py::class_<SpinOrbitRoot>(mod, "SpinOrbitRoot")
      .def_readonly("lam", &SpinOrbitRoot::lambda)
      .def_readonly("multiplicity", &SpinOrbitRoot::multiplicity)
      .def_readonly("coefficients", &SpinOrbitRoot::coefficients)
      .def_readonly("residual", &SpinOrbitRoot::residual);
  mod.def("secular_determinant", &secular_determinant, py::arg("p"), py::arg("lam"));
  mod.def("spectrum_in_window", &spectrum_in_window, py::arg("p"), py::arg("lo"), py::arg("hi"));
  mod.def("principal_eigenvalue", &principal_eigenvalue, py::arg("p"));

  mod.def("bessel_k", &bessel_k, py::arg("nu"), py::arg("x"));
  mod.def("deficiency_element", &deficiency_element, py::arg("p"), py::arg("sign"), py::arg("r"), py::arg("theta"));

  py::class_<Aux1DResult>(mod, "Aux1DResult")
      .def_readonly("gamma", &Aux1DResult::gamma)
      .def_readonly("k_gamma", &Aux1DResult::k_gamma)
      .def_readonly("E_gamma", &Aux1DResult::E_gamma)
      .def_readonly("deficit", &Aux1DResult::deficit);
  mod.def("ground_state", &ground_state, py::arg("p"), py::arg("gamma"));

  py::class_<EnergyBreakdown>(mod, "EnergyBreakdown")
      .def_readonly("jump_sq", &EnergyBreakdown::jump_sq)
      .def_readonly("l2_sq", &EnergyBreakdown::l2_sq)
      .def_readonly("gradx_sq", &EnergyBreakdown::gradx_sq)
      .def_readonly("grady_sq", &EnergyBreakdown::grady_sq)
      .def_readonly("form", &EnergyBreakdown::form)
      .def_readonly("form_gap", &EnergyBreakdown::form_gap)
      .def_readonly("bound_gap", &EnergyBreakdown::bound_gap)
      .def_readonly("mode_form_gap", &EnergyBreakdown::mode_form_gap);
  mod.def(
      "energy_breakdown",
      [](const PhysParams& p, int N, double L, std::vector<cplx> c) {
        return energy_breakdown(make_family(p, N, L, std::move(c)));
      },
      py::arg("p"), py::arg("N"), py::arg("L"), py::arg("c") = std::vector<cplx>{});
  mod.def("strip_angle", &strip_angle, py::arg("p"), py::arg("N"), py::arg("L"));
  mod.def("critical_angle_closed", &critical_angle_closed, py::arg("tau"), py::arg("N") = 1);
  mod.def(
      "critical_angle_maximize",
      [](const PhysParams& p, int N) {
        const auto c = critical_angle_maximize(p, N);
        return py::make_tuple(c.omega_star, c.L_star);
      },
      py::arg("p"), py::arg("N") = 1);

  py::class_<Certificate>(mod, "Certificate")
      .def_readonly("certified", &Certificate::certified)
      .def_readonly("L", &Certificate::L)
      .def_readonly("energy", &Certificate::energy);
  mod.def("bound_state_certificate", &bound_state_certificate, py::arg("p"), py::arg("N") = 1);

  py::class_<WeylEval>(mod, "WeylEval")
      .def_readonly("residual", &WeylEval::residual)
      .def_readonly("norm_sq", &WeylEval::norm_sq);
  mod.def("weyl_sequence", &weyl_sequence, py::arg("p"), py::arg("lam"), py::arg("n"));

  mod.def(
      "count_bound_states",
      [](const PhysParams& p, double h, int k, double R, double grading) {
        CountOptions o;
        o.mesh.h = h;
        o.mesh.R = R;
        o.mesh.grading = grading;
        o.k = k;
        SpectralReport rep;
        {
          py::gil_scoped_release release;
          rep = count_bound_states(p, o);
        }
        return py::module_::import("json").attr("loads")(to_json(rep).dump());
      },
      py::arg("p"), py::arg("h") = 0.5, py::arg("k") = 6, py::arg("R") = 10.0, py::arg("grading") = 0.5);

  // the CLI in-process: returns (exit code, stdout text, stderr text)
  mod.def("run_cli", [](const std::vector<std::string>& args) {
    std::ostringstream out, err;
    const int code = run_cli(args, out, err);
    return py::make_tuple(code, out.str(), err.str());
  });
}
