#include "phs/cli.hpp"
#include "phs/errors.hpp"
#include "phs/timestepping.hpp"

#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

namespace py = pybind11;

PYBIND11_MODULE(_core, m) {
  m.doc() = "Port-Hamiltonian structure checks, mimetic builders and midpoint simulation.";

  py::register_exception<phs::DimensionMismatch>(m, "DimensionMismatch", PyExc_ValueError);
  py::register_exception<phs::StructuralError>(m, "StructuralError", PyExc_RuntimeError);
  py::register_exception<phs::InvalidArgument>(m, "InvalidArgument", PyExc_ValueError);
  py::register_exception<phs::NumericalError>(m, "NumericalError", PyExc_ArithmeticError);

  py::class_<phs::GridSpec>(m, "GridSpec")
      .def(py::init([](std::vector<int> cells, std::vector<double> lengths) {
             phs::GridSpec g{static_cast<int>(cells.size()), std::move(cells), std::move(lengths)};
             g.validate();
             return g;
           }),
           py::arg("cells"), py::arg("lengths"))
      .def_readonly("dimension", &phs::GridSpec::dimension)
      .def_readonly("cells", &phs::GridSpec::cells_per_axis)
      .def_readonly("lengths", &phs::GridSpec::lengths_per_axis);

  py::class_<phs::CoefficientField>(m, "CoefficientField")
      .def(py::init<std::string, double, bool>(), py::arg("name"), py::arg("value"), py::arg("allow_zero") = false)
      .def(py::init<std::string, phs::Vector, bool>(), py::arg("name"), py::arg("values"), py::arg("allow_zero") = false)
      .def_readonly("name", &phs::CoefficientField::name)
      .def_readonly("values", &phs::CoefficientField::values);

  py::class_<phs::ElasticStiffness>(m, "ElasticStiffness")
      .def_static("lame", &phs::ElasticStiffness::lame, py::arg("lam"), py::arg("mu"))
      .def_static("voigt", &phs::ElasticStiffness::voigt, py::arg("c11"), py::arg("c22"), py::arg("c12"), py::arg("c66"));

  py::class_<phs::PortSystem>(m, "PortSystem")
      .def_readonly("label", &phs::PortSystem::label)
      .def_readonly("L", &phs::PortSystem::L)
      .def_readonly("K", &phs::PortSystem::K)
      .def_readonly("gamma1", &phs::PortSystem::gamma1)
      .def_readonly("gamma2", &phs::PortSystem::gamma2)
      .def_readonly("beta1", &phs::PortSystem::beta1)
      .def_readonly("beta2", &phs::PortSystem::beta2)
      .def_property_readonly("dims",
                             [](const phs::PortSystem& s) {
                               return py::dict(py::arg("X1") = s.x1.dim(), py::arg("X2") = s.x2.dim(),
                                               py::arg("U1") = s.u1.dim(), py::arg("U2") = s.u2.dim());
                             })
      .def("state_gram", &phs::PortSystem::state_gram)
      .def("input_gram", &phs::PortSystem::input_gram)
      .def("structure_matrix", &phs::PortSystem::structure_matrix)
      .def("boundary_map", &phs::PortSystem::boundary_map)
      .def("observation_map", &phs::PortSystem::observation_map)
      .def("snapshot", [](const phs::PortSystem& s) {
        std::ostringstream os;
        phs::write_snapshot(os, s);
        return os.str();
      });

  m.def("build_wave", &phs::build_wave, py::arg("grid"), py::arg("rho"), py::arg("tension"));
  m.def("build_elasticity_2d", &phs::build_elasticity_2d, py::arg("grid"), py::arg("rho"), py::arg("stiffness"));
  m.def("build_beam_1d", &phs::build_beam_1d, py::arg("grid"), py::arg("mu"), py::arg("bending"));
  m.def("build_maxwell_3d", &phs::build_maxwell_3d, py::arg("grid"), py::arg("eps"), py::arg("mu_mag"),
        py::arg("eta_inv") = std::nullopt);

  m.def("green_residual", &phs::green_residual);
  m.def("green_scale", &phs::green_scale);
  m.def("check_skew_symmetric_like", [](const phs::Matrix& j, const phs::Matrix& gram) {
    return phs::check_skew_symmetric_like(j, phs::GramSpace(gram));
  });
  m.def(
      "is_dirac",
      [](const phs::Matrix& basis, const phs::Matrix& gram, double tol) {
        return phs::is_dirac(phs::SubspaceBasis(basis), phs::GramSpace(gram), tol);
      },
      py::arg("basis"), py::arg("gram"), py::arg("tol") = 1e-10);
  m.def("graph_subspace", [](const phs::Matrix& j) { return phs::graph_subspace(j).basis(); });

  py::class_<phs::ExtendedOperator>(m, "ExtendedOperator")
      .def_readonly("A", &phs::ExtendedOperator::A)
      .def_readonly("B", &phs::ExtendedOperator::B)
      .def_readonly("C", &phs::ExtendedOperator::C)
      .def_readonly("full", &phs::ExtendedOperator::full)
      .def_property_readonly("gram", [](const phs::ExtendedOperator& op) { return op.extended.gram(); })
      .def("skew_residual", &phs::ExtendedOperator::skew_residual);
  m.def("assemble_extended", &phs::assemble_extended, py::arg("sys"), py::arg("tol") = 1e-12);

  py::class_<phs::ConstitutiveLaw>(m, "ConstitutiveLaw")
      .def_readonly("kind", &phs::ConstitutiveLaw::kind)
      .def_readonly("Q", &phs::ConstitutiveLaw::Q)
      .def_readonly("S", &phs::ConstitutiveLaw::S);
  m.def("build_constitutive",
        py::overload_cast<const std::string&, const phs::PortSystem&, const std::vector<phs::CoefficientField>&>(
            &phs::build_constitutive),
        py::arg("kind"), py::arg("sys"), py::arg("fields"));
  m.def("hamiltonian", &phs::hamiltonian, py::arg("law"), py::arg("alpha"), py::arg("sys"));

  py::class_<phs::Trajectory>(m, "Trajectory")
      .def_readonly("times", &phs::Trajectory::times)
      .def_readonly("energies", &phs::Trajectory::energies)
      .def_readonly("boundary_power", &phs::Trajectory::boundary_power)
      .def_readonly("dissipation", &phs::Trajectory::dissipation)
      .def_readonly("balance_residuals", &phs::Trajectory::balance_residuals)
      .def_readonly("warnings", &phs::Trajectory::warnings)
      .def_readonly("final_state", &phs::Trajectory::final_state);
  m.def(
      "simulate",
      [](const phs::PortSystem& sys, const phs::ConstitutiveLaw& law, const phs::Vector& x0, double dt, int steps,
         std::optional<phs::InputSignal> u) {
        const phs::InputSignal signal = u ? *u : phs::zero_input(sys.input_dim());
        py::gil_scoped_release release;
        return phs::simulate(sys, law, signal, x0, dt, steps);
      },
      py::arg("sys"), py::arg("law"), py::arg("x0"), py::arg("dt"), py::arg("steps"), py::arg("u") = std::nullopt);

  m.def(
      "convergence_order",
      [](const std::string& case_id, const std::vector<int>& refinements) {
        const auto r = phs::convergence_order(case_id, refinements);
        return py::dict(py::arg("cells") = r.cells, py::arg("errors") = r.errors, py::arg("orders") = r.orders,
                        py::arg("monotone") = r.monotone);
      },
      py::arg("case_id"), py::arg("refinements"));

  m.def(
      "verify",
      [](const std::string& target, int n, const std::string& corrupt) {
        return phs::cli::verify_suite(target, n, corrupt).json();
      },
      py::arg("target"), py::arg("n") = 0, py::arg("corrupt") = "");
}
