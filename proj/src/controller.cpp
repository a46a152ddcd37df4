#include "mgrid/controller.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <vector>

#include "mgrid/errors.hpp"

namespace mgrid {

EffectiveCurrentBounds effective_current_bounds(double v_l, double v_h,
                                                double G_l, double G_h,
                                                double I_l, double I_h,
                                                int node) {
  EffectiveCurrentBounds b;
  b.lo = std::max(v_l * G_l, I_l);
  b.hi = std::min(v_h * G_h, I_h);
  if (b.lo > b.hi) {
    std::ostringstream os;
    os << "empty joint safe set";
    if (node > 0) os << " at node " << node;
    os << ": I_tilde_l = " << b.lo << " > I_tilde_h = " << b.hi;
    throw EmptyJointSafeSetError(os.str(), node);
  }
  return b;
}

std::pair<double, double> current_reference(const NodeParams& np,
                                            ControllerMode mode) {
  switch (mode) {
    case ControllerMode::KnownLoad:
      return {np.G * np.v_l, np.G * np.v_h};
    case ControllerMode::LoadInterval:
      return {np.G_l * np.v_l, np.G_h * np.v_h};
    case ControllerMode::Joint:
    case ControllerMode::Relaxed: {
      EffectiveCurrentBounds b = effective_current_bounds(
          np.v_l, np.v_h, np.G_l, np.G_h, np.I_l, np.I_h);
      return {b.lo, b.hi};
    }
  }
  throw ParameterError("current_reference: unknown mode");
}

BarrierValues barrier_values(const NodeObservation& obs, const NodeParams& np,
                             ControllerMode mode) {
  const auto [ref_l, ref_h] = current_reference(np, mode);
  BarrierValues b;
  b.b_l = obs.V - np.v_l;
  b.b_h = np.v_h - obs.V;
  b.B_l = obs.I - ref_l;
  b.B_h = ref_h - obs.I;
  return b;
}

std::pair<double, double> constraint_interval(const NodeObservation& obs,
                                              const NodeParams& np,
                                              ControllerMode mode) {
  const auto [ref_l, ref_h] = current_reference(np, mode);
  const double lb = (obs.V - np.eta_l * (obs.I - ref_l)) / np.V_s;
  const double ub = (obs.V - np.eta_h * (obs.I - ref_h)) / np.V_s;
  return {lb, ub};
}

DutyDecision solve_strict(std::pair<double, double> interval, int node) {
  const double lo = std::max(interval.first, 0.0);
  const double hi = std::min(interval.second, 1.0);
  if (lo > hi) {
    std::ostringstream os;
    os << "strict QP infeasible";
    if (node > 0) os << " at node " << node;
    os << ": feasible interval [" << interval.first << ", " << interval.second
       << "] does not intersect [0, 1]";
    throw InfeasibleError(os.str(), node);
  }
  DutyDecision d;
  d.a = lo;  // closest point of [lo, hi] to zero, since lo >= 0
  return d;
}

DutyDecision solve_relaxed(const NodeObservation& obs, const NodeParams& np,
                           ControllerMode mode) {
  if (!(np.P_l > 0.0 && np.P_h > 0.0)) {
    throw ParameterError("solve_relaxed: slack penalties must be positive");
  }
  const auto [ref_l, ref_h] = current_reference(np, mode);
  // g_l(a) =  a V_s + c_l,  g_h(a) = -a V_s + c_h
  const double Vs = np.V_s;
  const double c_l = -obs.V + np.eta_l * (obs.I - ref_l);
  const double c_h = obs.V - np.eta_h * (obs.I - ref_h);

  const auto g_l = [&](double a) { return a * Vs + c_l; };
  const auto g_h = [&](double a) { return -a * Vs + c_h; };
  const auto objective = [&](double a) {
    const double el = std::max(0.0, -g_l(a));
    const double eh = std::max(0.0, -g_h(a));
    return a * a + np.P_l * el * el + np.P_h * eh * eh;
  };

  // Breakpoints where a constraint residual changes sign.
  std::vector<double> knots{0.0, 1.0};
  const double r_l = -c_l / Vs;
  const double r_h = c_h / Vs;
  if (r_l > 0.0 && r_l < 1.0) knots.push_back(r_l);
  if (r_h > 0.0 && r_h < 1.0) knots.push_back(r_h);
  std::sort(knots.begin(), knots.end());

  std::vector<double> candidates(knots);
  for (std::size_t k = 0; k + 1 < knots.size(); ++k) {
    const double x0 = knots[k], x1 = knots[k + 1];
    if (!(x1 > x0)) continue;
    const double mid = 0.5 * (x0 + x1);
    const bool l_active = g_l(mid) < 0.0;
    const bool h_active = g_h(mid) < 0.0;
    // Stationary point of the piece's quadratic
    //   a (1 + P_l Vs^2 [l] + P_h Vs^2 [h]) = -P_l Vs c_l [l] + P_h Vs c_h [h]
    double denom = 1.0;
    double num = 0.0;
    if (l_active) {
      denom += np.P_l * Vs * Vs;
      num += -np.P_l * Vs * c_l;
    }
    if (h_active) {
      denom += np.P_h * Vs * Vs;
      num += np.P_h * Vs * c_h;
    }
    const double a_st = num / denom;
    if (a_st >= x0 && a_st <= x1) candidates.push_back(a_st);
  }

  double best_a = 0.0;
  double best_J = std::numeric_limits<double>::infinity();
  for (double a : candidates) {
    const double J = objective(a);
    if (J < best_J || (J == best_J && a < best_a)) {
      best_J = J;
      best_a = a;
    }
  }

  DutyDecision d;
  d.a = best_a;
  d.eps_l = std::max(0.0, -g_l(best_a));
  d.eps_h = std::max(0.0, -g_h(best_a));
  return d;
}

MonitorResult zcbf_monitor(double h_value, double h_dot, double alpha_gain,
                           double tolerance) {
  if (!(alpha_gain > 0.0)) {
    throw ParameterError("zcbf_monitor: alpha_gain must be positive");
  }
  MonitorResult r;
  r.margin = h_dot + alpha_gain * h_value;
  r.pass = r.margin >= -tolerance;
  return r;
}

}  // namespace mgrid
