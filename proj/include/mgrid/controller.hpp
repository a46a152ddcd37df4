#pragma once

#include <utility>

namespace mgrid {

enum class ControllerMode { KnownLoad, LoadInterval, Joint, Relaxed };

// Node-local measurements only. Keeping this type free of any other node's
// state is what makes the controller decentralized.
struct NodeObservation {
  double I = 0.0;  // local inductor current (A)
  double V = 0.0;  // local load voltage (V)
};

// Per-node constants as seen by the controller. Snapshot taken once; the
// controller never tracks plant-side load changes.
struct NodeParams {
  double V_s = 0.0;
  double G = 0.0;
  double G_l = 0.0;
  double G_h = 0.0;
  double v_l = 0.0;
  double v_h = 0.0;
  double I_l = 0.0;
  double I_h = 0.0;
  double eta_l = 0.0;
  double eta_h = 0.0;
  double P_l = 0.0;
  double P_h = 0.0;
};

// Current band that makes the voltage and current objectives jointly
// satisfiable: lo = max(v_l G_l, I_l), hi = min(v_h G_h, I_h).
struct EffectiveCurrentBounds {
  double lo = 0.0;
  double hi = 0.0;
};

// Throws EmptyJointSafeSetError when lo > hi. `node` is used only for the
// error message (1-based, -1 if unknown).
EffectiveCurrentBounds effective_current_bounds(double v_l, double v_h,
                                                double G_l, double G_h,
                                                double I_l, double I_h,
                                                int node = -1);

// Current reference pair (ref_l, ref_h) used by the mode's constraints:
// (G v_l, G v_h) for KnownLoad, (G_l v_l, G_h v_h) for LoadInterval, and the
// effective bounds for Joint / Relaxed.
std::pair<double, double> current_reference(const NodeParams& np,
                                            ControllerMode mode);

// Voltage barriers b and current barriers B for the mode's reference.
// Each value is nonnegative iff the state is inside the corresponding set.
struct BarrierValues {
  double b_l = 0.0;  // V - v_l
  double b_h = 0.0;  // v_h - V
  double B_l = 0.0;  // I - ref_l
  double B_h = 0.0;  // ref_h - I
};

BarrierValues barrier_values(const NodeObservation& obs, const NodeParams& np,
                             ControllerMode mode);

// Raw interval [lb, ub] for the duty ratio implied by the two barrier
// constraints, BEFORE intersecting with [0, 1]:
//   lb = (V - eta_l (I - ref_l)) / V_s
//   ub = (V - eta_h (I - ref_h)) / V_s
std::pair<double, double> constraint_interval(const NodeObservation& obs,
                                              const NodeParams& np,
                                              ControllerMode mode);

struct DutyDecision {
  double a = 0.0;      // duty ratio, always in [0, 1]
  double eps_l = 0.0;  // lower-constraint slack (0 in strict modes)
  double eps_h = 0.0;  // upper-constraint slack (0 in strict modes)
  bool feasible = true;
};

// Minimum-norm point of [max(lb,0), min(ub,1)]. Throws InfeasibleError when
// that set is empty; never silently clamps.
DutyDecision solve_strict(std::pair<double, double> interval, int node = -1);

// Slack-penalized recovery QP
//   min a^2 + P_l eps_l^2 + P_h eps_h^2
//   s.t. a V_s - V + eta_l (I - ref_l) + eps_l >= 0
//       -a V_s + V - eta_h (I - ref_h) + eps_h >= 0,  0 <= a <= 1.
// For fixed a the optimal slacks are eps = max(0, -g), which turns the
// objective into a piecewise quadratic in a; the minimizer is found exactly by
// enumerating the stationary point of each piece, the constraint roots, and
// the endpoints. Always feasible.
DutyDecision solve_relaxed(const NodeObservation& obs, const NodeParams& np,
                           ControllerMode mode = ControllerMode::Joint);

struct MonitorResult {
  double margin = 0.0;  // h_dot + alpha_gain * h
  bool pass = true;
};

// Zeroing-CBF condition check with a linear class-K function.
MonitorResult zcbf_monitor(double h_value, double h_dot, double alpha_gain,
                           double tolerance = 1e-6);

}  // namespace mgrid
