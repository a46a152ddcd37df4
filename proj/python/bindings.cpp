#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "mgrid/config.hpp"
#include "mgrid/controller.hpp"
#include "mgrid/errors.hpp"
#include "mgrid/grid_model.hpp"
#include "mgrid/parameters.hpp"
#include "mgrid/sim.hpp"
#include "mgrid/topology.hpp"
#include "mgrid/trace_io.hpp"

namespace py = pybind11;
using namespace mgrid;

PYBIND11_MODULE(_core, m) {
  m.doc() = "DC microgrid CBF safety-filter simulator";

  py::register_exception<TopologyError>(m, "TopologyError");
  py::register_exception<ParameterError>(m, "ParameterError");
  py::register_exception<DimensionError>(m, "DimensionError");
  py::register_exception<EmptyJointSafeSetError>(m, "EmptyJointSafeSetError");
  py::register_exception<InfeasibleError>(m, "InfeasibleError");
  py::register_exception<NumericalDivergenceError>(m, "NumericalDivergenceError");
  py::register_exception<ConfigError>(m, "ConfigError");
  py::register_exception<AssumptionError>(m, "AssumptionError");

  py::class_<Edge>(m, "Edge")
      .def(py::init<int, int>(), py::arg("head"), py::arg("tail"))
      .def_readwrite("head", &Edge::head)
      .def_readwrite("tail", &Edge::tail);

  py::class_<GridTopology>(m, "GridTopology")
      .def(py::init<>())
      .def(py::init([](int n, const std::vector<std::pair<int, int>>& edges) {
             GridTopology t;
             t.n = n;
             for (const auto& [h, tl] : edges) t.edges.push_back({h, tl});
             return t;
           }),
           py::arg("n"), py::arg("edges"))
      .def_readwrite("n", &GridTopology::n)
      .def_readwrite("edges", &GridTopology::edges)
      .def("validate", &GridTopology::validate)
      .def("is_connected", &GridTopology::is_connected);

  py::class_<GridParameters>(m, "GridParameters")
      .def(py::init<>())
      .def_readwrite("L", &GridParameters::L)
      .def_readwrite("C", &GridParameters::C)
      .def_readwrite("G", &GridParameters::G)
      .def_readwrite("G_l", &GridParameters::G_l)
      .def_readwrite("G_h", &GridParameters::G_h)
      .def_readwrite("V_s", &GridParameters::V_s)
      .def_readwrite("v_l", &GridParameters::v_l)
      .def_readwrite("v_h", &GridParameters::v_h)
      .def_readwrite("I_l", &GridParameters::I_l)
      .def_readwrite("I_h", &GridParameters::I_h)
      .def_readwrite("R", &GridParameters::R);

  py::class_<AssumptionCheck>(m, "AssumptionCheck")
      .def_readonly("name", &AssumptionCheck::name)
      .def_readonly("pass_", &AssumptionCheck::pass)
      .def_readonly("failing_nodes", &AssumptionCheck::failing_nodes);

  py::class_<ValidationReport>(m, "ValidationReport")
      .def_readonly("checks", &ValidationReport::checks)
      .def("all_pass", &ValidationReport::all_pass)
      .def("summary", &ValidationReport::summary);

  py::class_<GridState>(m, "GridState")
      .def(py::init<>())
      .def(py::init([](Eigen::VectorXd I, Eigen::VectorXd V) {
             return GridState{std::move(I), std::move(V)};
           }),
           py::arg("I"), py::arg("V"))
      .def_readwrite("I", &GridState::I)
      .def_readwrite("V", &GridState::V);

  m.def("incidence_matrix", &incidence_matrix, py::arg("topology"));
  m.def("effective_conductance", &effective_conductance, py::arg("params"),
        py::arg("B"));
  m.def("dynamics", &dynamics, py::arg("state"), py::arg("u"), py::arg("params"),
        py::arg("B"));
  m.def("forced_equilibrium", &forced_equilibrium, py::arg("u_bar"),
        py::arg("params"), py::arg("B"));
  m.def("validate_assumptions", &validate_assumptions, py::arg("params"));

  py::enum_<ControllerMode>(m, "ControllerMode")
      .value("KnownLoad", ControllerMode::KnownLoad)
      .value("LoadInterval", ControllerMode::LoadInterval)
      .value("Joint", ControllerMode::Joint)
      .value("Relaxed", ControllerMode::Relaxed);

  py::class_<NodeObservation>(m, "NodeObservation")
      .def(py::init<double, double>(), py::arg("I"), py::arg("V"))
      .def_readwrite("I", &NodeObservation::I)
      .def_readwrite("V", &NodeObservation::V);

  py::class_<NodeParams>(m, "NodeParams")
      .def(py::init<>())
      .def_readwrite("V_s", &NodeParams::V_s)
      .def_readwrite("G", &NodeParams::G)
      .def_readwrite("G_l", &NodeParams::G_l)
      .def_readwrite("G_h", &NodeParams::G_h)
      .def_readwrite("v_l", &NodeParams::v_l)
      .def_readwrite("v_h", &NodeParams::v_h)
      .def_readwrite("I_l", &NodeParams::I_l)
      .def_readwrite("I_h", &NodeParams::I_h)
      .def_readwrite("eta_l", &NodeParams::eta_l)
      .def_readwrite("eta_h", &NodeParams::eta_h)
      .def_readwrite("P_l", &NodeParams::P_l)
      .def_readwrite("P_h", &NodeParams::P_h);

  py::class_<EffectiveCurrentBounds>(m, "EffectiveCurrentBounds")
      .def_readonly("lo", &EffectiveCurrentBounds::lo)
      .def_readonly("hi", &EffectiveCurrentBounds::hi);

  m.def("effective_current_bounds", &effective_current_bounds, py::arg("v_l"),
        py::arg("v_h"), py::arg("G_l"), py::arg("G_h"), py::arg("I_l"),
        py::arg("I_h"), py::arg("node") = -1);
  m.def("current_reference", &current_reference, py::arg("params"),
        py::arg("mode"));

  py::class_<BarrierValues>(m, "BarrierValues")
      .def_readonly("b_l", &BarrierValues::b_l)
      .def_readonly("b_h", &BarrierValues::b_h)
      .def_readonly("B_l", &BarrierValues::B_l)
      .def_readonly("B_h", &BarrierValues::B_h);

  m.def("barrier_values", &barrier_values, py::arg("obs"), py::arg("params"),
        py::arg("mode"));
  m.def("constraint_interval", &constraint_interval, py::arg("obs"),
        py::arg("params"), py::arg("mode"));

  py::class_<DutyDecision>(m, "DutyDecision")
      .def_readonly("a", &DutyDecision::a)
      .def_readonly("eps_l", &DutyDecision::eps_l)
      .def_readonly("eps_h", &DutyDecision::eps_h)
      .def_readonly("feasible", &DutyDecision::feasible);

  m.def("solve_strict", &solve_strict, py::arg("interval"), py::arg("node") = -1);
  m.def("solve_relaxed", &solve_relaxed, py::arg("obs"), py::arg("params"),
        py::arg("mode") = ControllerMode::Joint);

  py::class_<MonitorResult>(m, "MonitorResult")
      .def_readonly("margin", &MonitorResult::margin)
      .def_readonly("pass_", &MonitorResult::pass);

  m.def("zcbf_monitor", &zcbf_monitor, py::arg("h_value"), py::arg("h_dot"),
        py::arg("alpha_gain"), py::arg("tolerance") = 1e-6);

  py::enum_<SwitchPolicy>(m, "SwitchPolicy")
      .value("AlwaysStrict", SwitchPolicy::AlwaysStrict)
      .value("RelaxedUntilFeasible", SwitchPolicy::RelaxedUntilFeasible);

  py::class_<LoadScaleEvent>(m, "LoadScaleEvent")
      .def(py::init<double, double>(), py::arg("time"), py::arg("factor"))
      .def_readwrite("time", &LoadScaleEvent::time)
      .def_readwrite("factor", &LoadScaleEvent::factor);

  py::class_<ControllerSpec>(m, "ControllerSpec")
      .def(py::init<>())
      .def_readwrite("mode", &ControllerSpec::mode)
      .def_readwrite("eta_l", &ControllerSpec::eta_l)
      .def_readwrite("eta_h", &ControllerSpec::eta_h)
      .def_readwrite("P_l", &ControllerSpec::P_l)
      .def_readwrite("P_h", &ControllerSpec::P_h);

  py::class_<Scenario>(m, "Scenario")
      .def(py::init<>())
      .def_readwrite("duration", &Scenario::duration)
      .def_readwrite("dt", &Scenario::dt)
      .def_readwrite("substeps", &Scenario::substeps)
      .def_readwrite("I0", &Scenario::I0)
      .def_readwrite("V0", &Scenario::V0)
      .def_readwrite("controller", &Scenario::controller)
      .def_readwrite("events", &Scenario::events)
      .def_readwrite("switch_policy", &Scenario::switch_policy);

  py::class_<TraceRecord>(m, "TraceRecord")
      .def_readonly("t", &TraceRecord::t)
      .def_readonly("I", &TraceRecord::I)
      .def_readonly("V", &TraceRecord::V)
      .def_readonly("u", &TraceRecord::u)
      .def_readonly("eps_l", &TraceRecord::eps_l)
      .def_readonly("eps_h", &TraceRecord::eps_h)
      .def_readonly("strict_mode", &TraceRecord::strict_mode)
      .def_readonly("b_l", &TraceRecord::b_l)
      .def_readonly("b_h", &TraceRecord::b_h)
      .def_readonly("B_l", &TraceRecord::B_l)
      .def_readonly("B_h", &TraceRecord::B_h)
      .def_readonly("margin_l", &TraceRecord::margin_l)
      .def_readonly("margin_h", &TraceRecord::margin_h)
      .def_readonly("viol_voltage", &TraceRecord::viol_voltage)
      .def_readonly("viol_current", &TraceRecord::viol_current);

  py::class_<ViolationInterval>(m, "ViolationInterval")
      .def_readonly("t_begin", &ViolationInterval::t_begin)
      .def_readonly("t_end", &ViolationInterval::t_end);

  py::class_<NodeSafetySummary>(m, "NodeSafetySummary")
      .def_readonly("min_V", &NodeSafetySummary::min_V)
      .def_readonly("max_V", &NodeSafetySummary::max_V)
      .def_readonly("min_I", &NodeSafetySummary::min_I)
      .def_readonly("max_I", &NodeSafetySummary::max_I)
      .def_readonly("voltage_violations", &NodeSafetySummary::voltage_violations)
      .def_readonly("current_violations", &NodeSafetySummary::current_violations)
      .def_readonly("effective_current_violations",
                    &NodeSafetySummary::effective_current_violations)
      .def_readonly("first_entry", &NodeSafetySummary::first_entry)
      .def_readonly("entered", &NodeSafetySummary::entered);

  py::class_<SafetyReport>(m, "SafetyReport")
      .def_readonly("nodes", &SafetyReport::nodes);

  py::class_<SimResult>(m, "SimResult")
      .def_readonly("trace", &SimResult::trace)
      .def_readonly("report", &SimResult::report)
      .def_readonly("warnings", &SimResult::warnings);

  m.def("integrate_step", &integrate_step, py::arg("state"), py::arg("u"),
        py::arg("params"), py::arg("B"), py::arg("dt"));
  m.def("apply_event", &apply_event, py::arg("params"), py::arg("event"));
  m.def("run_scenario", &run_scenario, py::arg("scenario"), py::arg("params"),
        py::arg("topology"), py::call_guard<py::gil_scoped_release>());
  m.def("safety_report", &safety_report, py::arg("trace"), py::arg("params"));

  py::class_<ScenarioConfig>(m, "ScenarioConfig")
      .def_readwrite("topology", &ScenarioConfig::topology)
      .def_readwrite("params", &ScenarioConfig::params)
      .def_readwrite("scenario", &ScenarioConfig::scenario)
      .def_readwrite("trace_path", &ScenarioConfig::trace_path)
      .def_readwrite("report_path", &ScenarioConfig::report_path)
      .def_readwrite("plots", &ScenarioConfig::plots);

  m.def("parse_config", &parse_config, py::arg("path"));
  m.def("parse_config_text", &parse_config_text, py::arg("text"));
  m.def("write_config", &write_config, py::arg("config"));
  m.def("report_to_json", &report_to_json, py::arg("report"));
}
