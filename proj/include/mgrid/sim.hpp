#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "mgrid/controller.hpp"
#include "mgrid/grid_model.hpp"
#include "mgrid/parameters.hpp"
#include "mgrid/topology.hpp"

namespace mgrid {

// Scales the true plant load: G <- factor * G. Controller-side bounds are
// deliberately left untouched; the controller is load-agnostic.
struct LoadScaleEvent {
  double time = 0.0;
  double factor = 1.0;
};

enum class SwitchPolicy { AlwaysStrict, RelaxedUntilFeasible };

struct ControllerSpec {
  ControllerMode mode = ControllerMode::Joint;
  Eigen::VectorXd eta_l;
  Eigen::VectorXd eta_h;
  Eigen::VectorXd P_l;  // slack penalties, used by Relaxed
  Eigen::VectorXd P_h;
};

struct Scenario {
  double duration = 0.0;
  double dt = 0.0;    // control period (zero-order hold)
  int substeps = 1;   // RK4 steps per control period
  Eigen::VectorXd I0;
  Eigen::VectorXd V0;
  ControllerSpec controller;
  std::vector<LoadScaleEvent> events;
  SwitchPolicy switch_policy = SwitchPolicy::RelaxedUntilFeasible;
};

struct TraceRecord {
  double t = 0.0;
  Eigen::VectorXd I;
  Eigen::VectorXd V;
  Eigen::VectorXd u;
  Eigen::VectorXd eps_l;
  Eigen::VectorXd eps_h;
  std::vector<std::uint8_t> strict_mode;  // 1 once a node has latched
  Eigen::VectorXd b_l, b_h;               // voltage barriers
  Eigen::VectorXd B_l, B_h;               // current barriers (mode reference)
  Eigen::VectorXd margin_l, margin_h;     // ZCBF margins for the current barriers
  std::vector<std::uint8_t> viol_voltage;  // outside [v_l, v_h]
  std::vector<std::uint8_t> viol_current;  // outside [I_l, I_h]
};

struct ViolationInterval {
  double t_begin = 0.0;
  double t_end = 0.0;
};

struct NodeSafetySummary {
  double min_V = 0.0, max_V = 0.0;
  double min_I = 0.0, max_I = 0.0;
  std::vector<ViolationInterval> voltage_violations;            // vs [v_l, v_h]
  std::vector<ViolationInterval> current_violations;            // vs [I_l, I_h]
  std::vector<ViolationInterval> effective_current_violations;  // vs [Itl, Ith]
  double first_entry = -1.0;  // first time strictly inside the joint safe set
  bool entered = false;
};

struct SafetyReport {
  std::vector<NodeSafetySummary> nodes;
};

struct SimResult {
  std::vector<TraceRecord> trace;
  SafetyReport report;
  std::vector<std::string> warnings;
};

// One classical RK4 step of the grid dynamics with zero-order-hold input.
// Throws NumericalDivergenceError if the state leaves the finite range.
GridState integrate_step(const GridState& state, const Eigen::VectorXd& u,
                         const GridParameters& params, const Eigen::MatrixXd& B,
                         double dt);

GridParameters apply_event(const GridParameters& params,
                           const LoadScaleEvent& event);

// Fixed-step closed-loop run. Controller parameters are snapshotted at t = 0;
// events mutate only the plant. Under RelaxedUntilFeasible each node runs the
// relaxed QP until its (I_i, V_i) lies strictly inside the joint safe set,
// then latches permanently to the strict Joint QP.
SimResult run_scenario(const Scenario& scenario, const GridParameters& params,
                       const GridTopology& topology);

// Violation intervals by sign change of the bound residuals, with linear
// interpolation of the crossing times between samples.
SafetyReport safety_report(const std::vector<TraceRecord>& trace,
                           const GridParameters& params);

}  // namespace mgrid
