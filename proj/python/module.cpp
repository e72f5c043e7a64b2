#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "hypstab/boundary.hpp"
#include "hypstab/commands.hpp"
#include "hypstab/config.hpp"
#include "hypstab/errors.hpp"
#include "hypstab/potential.hpp"
#include "hypstab/sim.hpp"
#include "hypstab/symlin.hpp"
#include "hypstab/sysdef.hpp"

namespace py = pybind11;
using namespace hypstab;

namespace {

using Rows = std::vector<std::vector<double>>;

py::tuple eigen_tuple(const EigenDecomposition& e) { return py::make_tuple(e.eigenvalues, e.T.rows()); }

HyperbolicSystem make_system(const std::vector<Rows>& jacobians, const std::optional<Rows>& source) {
  std::vector<SymMatrix> jac;
  for (const auto& j : jacobians) jac.push_back(SymMatrix::from_rows(j));
  const std::size_t n = jac.empty() ? 0 : jac.front().size();
  return HyperbolicSystem(std::move(jac), source ? Matrix::from_rows(*source) : Matrix(n));
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Lyapunov boundary feedback for linear symmetric hyperbolic systems";

  // translators run newest first, so the subclass is registered last
  py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);

  m.def("eigendecompose", [](const Rows& a) { return eigen_tuple(eigendecompose(SymMatrix::from_rows(a))); },
        py::arg("matrix"), "Ascending eigenvalues and the orthogonal eigenvector matrix (columns).");

  py::class_<HyperbolicSystem>(m, "HyperbolicSystem")
      .def(py::init(&make_system), py::arg("jacobians"), py::arg("source") = std::nullopt)
      .def_property_readonly("dimension", &HyperbolicSystem::dimension)
      .def_property_readonly("state_size", &HyperbolicSystem::state_size)
      .def_property_readonly("label", &HyperbolicSystem::label)
      .def("jacobian", [](const HyperbolicSystem& s, std::size_t k) { return s.jacobian(k).rows(); })
      .def("source", [](const HyperbolicSystem& s) { return s.source().rows(); })
      .def("pencil", [](const HyperbolicSystem& s, const Vector& nu) { return s.pencil(nu).rows(); });

  m.def(
      "euler_system",
      [](double rho_bar, std::array<double, 2> v_bar, double a_bar) {
        return euler_symmetrized(EulerScenario{rho_bar, v_bar, a_bar});
      },
      py::arg("rho_bar") = 1.0, py::arg("v_bar") = std::array<double, 2>{3.0, 0.0}, py::arg("a_bar") = 1.0);
  m.def(
      "euler_eigenstructure",
      [](std::array<double, 2> v_bar, double a_bar, const Vector& nu) {
        return eigen_tuple(euler_eigenstructure(EulerScenario{1.0, v_bar, a_bar}, nu));
      },
      py::arg("v_bar"), py::arg("a_bar"), py::arg("nu"));
  m.def("random_system", &random_constant_system, py::arg("seed"), py::arg("d") = 2, py::arg("n") = 3);

  py::class_<LyapunovPotential>(m, "LyapunovPotential")
      .def(py::init(&LyapunovPotential::make), py::arg("m"), py::arg("C_A"), py::arg("C_B") = 0.0,
           py::arg("includes_remainder") = false)
      .def_static("zero", &LyapunovPotential::zero)
      .def_readonly("m", &LyapunovPotential::m)
      .def_readonly("C_A", &LyapunovPotential::C_A)
      .def_readonly("C_B", &LyapunovPotential::C_B)
      .def_readonly("C_L", &LyapunovPotential::C_L)
      .def_readonly("includes_remainder", &LyapunovPotential::includes_remainder);

  py::class_<PotentialSearch>(m, "PotentialSearch")
      .def_property_readonly("feasible", &PotentialSearch::feasible)
      .def_readonly("potential", &PotentialSearch::potential)
      .def_readonly("best_direction", &PotentialSearch::best_direction)
      .def_readonly("best_value", &PotentialSearch::best_value);

  m.def(
      "lmi_check", [](const HyperbolicSystem& s, const Vector& mv, double C) { return lmi_check(s, mv, C); },
      py::arg("system"), py::arg("m"), py::arg("C"));
  m.def("find_potential", &find_potential, py::arg("system"), py::arg("C_B") = 0.0,
        py::arg("C_A_override") = std::nullopt);
  m.def("find_potential_with_remainder", &find_potential_with_remainder, py::arg("system"),
        py::arg("C_A_override") = std::nullopt);
  m.def(
      "grid_scan_lmi",
      [](const HyperbolicSystem& s, double C, double range, double step) {
        const auto r = grid_scan_lmi(s, C, range, step);
        return py::make_tuple(r.feasible, r.witness, r.points_checked);
      },
      py::arg("system"), py::arg("C") = 1.0, py::arg("range") = 10.0, py::arg("step") = 0.05,
      "(feasible, witness, points_checked)");
  m.def(
      "compare_with_grid_oracle",
      [](const HyperbolicSystem& s) {
        const auto c = compare_with_grid_oracle(s);
        return py::dict(py::arg("agree") = c.agree(), py::arg("grid_feasible") = c.grid.feasible,
                        py::arg("solver_feasible") = c.search.feasible(),
                        py::arg("solver_certified") = c.solver_certified);
      },
      py::arg("system"));

  py::class_<Grid>(m, "Grid")
      .def(py::init<std::vector<std::size_t>, std::vector<double>>(), py::arg("cells"), py::arg("lengths"))
      .def_property_readonly("dimension", &Grid::dimension)
      .def_property_readonly("cell_count", &Grid::cell_count)
      .def("spacing", &Grid::spacing)
      .def("cell_center", &Grid::cell_center);

  m.def(
      "partition_counts",
      [](const HyperbolicSystem& s, const Grid& g) {
        const auto p = partition_boundary(s, g.boundary_faces());
        std::vector<std::pair<std::size_t, std::size_t>> out;
        for (std::size_t i = 0; i < p.n; ++i) out.emplace_back(p.gamma_minus[i].size(), p.gamma_plus[i].size());
        return out;
      },
      py::arg("system"), py::arg("grid"), "Per characteristic index: (inflow faces, outflow faces).");

  py::enum_<ControlMode>(m, "ControlMode")
      .value("zero", ControlMode::zero)
      .value("scalar", ControlMode::scalar)
      .value("componentwise", ControlMode::componentwise)
      .value("prescribed", ControlMode::prescribed);

  py::class_<ControlSpec>(m, "ControlSpec")
      .def(py::init([](ControlMode mode, double C, std::optional<Vector> value) {
             ControlSpec c;
             c.mode = mode;
             c.C = C;
             if (value) c.prescribed = [v = *value](double, std::span<const double>) { return v; };
             return c;
           }),
           py::arg("mode") = ControlMode::scalar, py::arg("C") = 0.0, py::arg("prescribed") = std::nullopt)
      .def_readwrite("mode", &ControlSpec::mode)
      .def_readwrite("C", &ControlSpec::C);

  py::class_<RunRecord>(m, "RunRecord")
      .def_readonly("t", &RunRecord::t)
      .def_readonly("L", &RunRecord::L)
      .def_readonly("boundary_integral", &RunRecord::boundary_integral)
      .def_readonly("boundary_magnitude", &RunRecord::boundary_magnitude)
      .def_readonly("controls", &RunRecord::controls)
      .def_readonly("steps", &RunRecord::steps)
      .def_readonly("dt", &RunRecord::dt)
      .def_readonly("c_fit", &RunRecord::c_fit)
      .def_readonly("C_L", &RunRecord::C_L)
      .def_property_readonly("final_state", [](const RunRecord& r) { return r.final_state.w; })
      .def("to_csv", [](const RunRecord& r) {
        std::ostringstream os;
        write_csv(os, r);
        return os.str();
      });

  m.def("initial_bump", &initial_bump, py::arg("grid"), py::arg("n"), py::arg("amplitude") = 0.1);
  m.def(
      "run",
      [](const HyperbolicSystem& s, const Grid& g, std::vector<double> w0, const LyapunovPotential& pot,
         const ControlSpec& control, double t_end, double cfl) {
        py::gil_scoped_release release;
        return run(s, g, std::move(w0), pot, control, t_end, cfl);
      },
      py::arg("system"), py::arg("grid"), py::arg("w0"), py::arg("potential"), py::arg("control"),
      py::arg("t_end"), py::arg("cfl") = 0.45);
  m.def(
      "fit_decay_rate",
      [](const std::vector<double>& t, const std::vector<double>& L) { return fit_decay_rate(t, L); },
      py::arg("t"), py::arg("L"));

  m.def(
      "parse_config", [](const std::string& text) { return serialize_config(parse_config(text)); },
      py::arg("text"), "Validate a config and return its canonical serialization.");
  m.def(
      "serialize_config", []() { return serialize_config(ScenarioConfig{}); },
      "Canonical text of the default config.");
  m.def(
      "run_command",
      [](const std::string& name, const std::string& config_path, std::optional<std::string> csv, bool quiet) {
        std::ostringstream out;
        std::ostringstream err;
        const int code = run_command(name, CommandOptions{config_path, std::move(csv), quiet}, out, err);
        return py::make_tuple(code, out.str(), err.str());
      },
      py::arg("name"), py::arg("config"), py::arg("csv") = std::nullopt, py::arg("quiet") = false,
      "Run check, run or oracle; returns (exit_code, stdout, stderr).");
}
