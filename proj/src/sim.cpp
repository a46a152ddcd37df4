#include "mgrid/sim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "mgrid/errors.hpp"

namespace mgrid {

GridState integrate_step(const GridState& state, const Eigen::VectorXd& u,
                         const GridParameters& params, const Eigen::MatrixXd& B,
                         double dt) {
  if (!(dt > 0.0)) throw ParameterError("integrate_step: dt must be positive");
  const auto f = [&](const GridState& s) { return dynamics(s, u, params, B); };

  const auto [k1I, k1V] = f(state);
  const auto [k2I, k2V] =
      f({state.I + 0.5 * dt * k1I, state.V + 0.5 * dt * k1V});
  const auto [k3I, k3V] =
      f({state.I + 0.5 * dt * k2I, state.V + 0.5 * dt * k2V});
  const auto [k4I, k4V] = f({state.I + dt * k3I, state.V + dt * k3V});

  GridState next;
  next.I = state.I + (dt / 6.0) * (k1I + 2.0 * k2I + 2.0 * k3I + k4I);
  next.V = state.V + (dt / 6.0) * (k1V + 2.0 * k2V + 2.0 * k3V + k4V);
  if (!next.I.allFinite() || !next.V.allFinite()) {
    throw NumericalDivergenceError("integration produced a non-finite state");
  }
  return next;
}

GridParameters apply_event(const GridParameters& params,
                           const LoadScaleEvent& event) {
  if (!(event.factor > 0.0)) {
    throw ParameterError("apply_event: load scale factor must be positive");
  }
  GridParameters next = params;
  next.G *= event.factor;
  return next;
}

namespace {

NodeParams node_params(const GridParameters& p, const ControllerSpec& spec,
                       int i) {
  NodeParams np;
  np.V_s = p.V_s[i];
  np.G = p.G[i];
  np.G_l = p.G_l[i];
  np.G_h = p.G_h[i];
  np.v_l = p.v_l[i];
  np.v_h = p.v_h[i];
  np.I_l = p.I_l[i];
  np.I_h = p.I_h[i];
  np.eta_l = spec.eta_l[i];
  np.eta_h = spec.eta_h[i];
  np.P_l = spec.P_l.size() > i ? spec.P_l[i] : 0.0;
  np.P_h = spec.P_h.size() > i ? spec.P_h[i] : 0.0;
  return np;
}

// Appends intervals where residual(sample) < 0, with linear interpolation of
// the crossing times between samples.
void scan_violations(const std::vector<double>& t,
                     const std::vector<double>& residual,
                     std::vector<ViolationInterval>& out) {
  const std::size_t nrec = t.size();
  bool open = false;
  double begin = 0.0;
  for (std::size_t k = 0; k < nrec; ++k) {
    const bool bad = residual[k] < 0.0;
    if (bad && !open) {
      begin = t[k];
      if (k > 0) {
        const double r0 = residual[k - 1], r1 = residual[k];
        begin = t[k - 1] + (t[k] - t[k - 1]) * (r0 / (r0 - r1));
      }
      open = true;
    } else if (!bad && open) {
      const double r0 = residual[k - 1], r1 = residual[k];
      const double end =
          r0 < 0.0 ? t[k - 1] + (t[k] - t[k - 1]) * (-r0 / (r1 - r0)) : t[k];
      out.push_back({begin, end});
      open = false;
    }
  }
  if (open) out.push_back({begin, t.back()});
}

}  // namespace

SimResult run_scenario(const Scenario& scenario, const GridParameters& params,
                       const GridTopology& topology) {
  topology.validate();
  params.validate_shape(topology);
  const int n = topology.n;
  if (!(scenario.dt > 0.0)) throw ParameterError("scenario: dt must be > 0");
  if (scenario.substeps < 1) {
    throw ParameterError("scenario: substeps must be >= 1");
  }
  if (scenario.duration < scenario.dt) {
    throw ParameterError("scenario: duration must be >= dt");
  }
  if (scenario.I0.size() != n || scenario.V0.size() != n ||
      scenario.controller.eta_l.size() != n ||
      scenario.controller.eta_h.size() != n) {
    throw DimensionError("scenario: vector sizes do not match topology");
  }
  for (const auto& ev : scenario.events) {
    if (ev.time < 0.0 || ev.time > scenario.duration) {
      throw ParameterError("scenario: event time outside [0, duration]");
    }
  }
  {
    const ValidationReport rep = validate_assumptions(params);
    if (!rep.all_pass()) {
      throw AssumptionError("scenario parameters violate model assumptions:\n" +
                            rep.summary());
    }
  }

  const Eigen::MatrixXd B = incidence_matrix(topology);
  const ControllerSpec& spec = scenario.controller;
  const SwitchPolicy policy = scenario.switch_policy;

  // Controller-side snapshot; events below only touch the plant.
  std::vector<NodeParams> nps;
  nps.reserve(n);
  for (int i = 0; i < n; ++i) nps.push_back(node_params(params, spec, i));

  const bool needs_joint =
      policy == SwitchPolicy::RelaxedUntilFeasible ||
      spec.mode == ControllerMode::Joint || spec.mode == ControllerMode::Relaxed;
  std::vector<EffectiveCurrentBounds> eff(n);
  if (needs_joint) {
    for (int i = 0; i < n; ++i) {
      eff[i] = effective_current_bounds(nps[i].v_l, nps[i].v_h, nps[i].G_l,
                                        nps[i].G_h, nps[i].I_l, nps[i].I_h,
                                        i + 1);
    }
  }

  SimResult result;

  // Step-size sanity against the fastest plant and controller time scales.
  {
    const Eigen::MatrixXd Gp = effective_conductance(params, B);
    double tau = std::numeric_limits<double>::infinity();
    for (int i = 0; i < n; ++i) {
      tau = std::min(tau, params.C[i] / Gp(i, i));
      const double eta = std::max(spec.eta_l[i], spec.eta_h[i]);
      if (eta > 0.0) tau = std::min(tau, params.L[i] / eta);
    }
    if (scenario.dt > tau) {
      std::ostringstream os;
      os << "dt = " << scenario.dt
         << " does not resolve the fastest time constant (" << tau << " s)";
      result.warnings.push_back(os.str());
    }
  }

  std::vector<LoadScaleEvent> events(scenario.events);
  std::stable_sort(events.begin(), events.end(),
                   [](const LoadScaleEvent& a, const LoadScaleEvent& b) {
                     return a.time < b.time;
                   });
  std::size_t next_event = 0;

  GridParameters plant = params;
  GridState state{scenario.I0, scenario.V0};
  std::vector<std::uint8_t> latched(n, 0);
  const long steps = std::lround(scenario.duration / scenario.dt);

  result.trace.reserve(static_cast<std::size_t>(steps) + 1);

  for (long k = 0; k <= steps; ++k) {
    const double t = static_cast<double>(k) * scenario.dt;

    while (next_event < events.size() && events[next_event].time <= t) {
      plant = apply_event(plant, events[next_event]);
      ++next_event;
    }

    TraceRecord rec;
    rec.t = t;
    rec.I = state.I;
    rec.V = state.V;
    rec.u.resize(n);
    rec.eps_l = Eigen::VectorXd::Zero(n);
    rec.eps_h = Eigen::VectorXd::Zero(n);
    rec.strict_mode.assign(n, 0);
    rec.b_l.resize(n);
    rec.b_h.resize(n);
    rec.B_l.resize(n);
    rec.B_h.resize(n);
    rec.margin_l.resize(n);
    rec.margin_h.resize(n);
    rec.viol_voltage.assign(n, 0);
    rec.viol_current.assign(n, 0);

    for (int i = 0; i < n; ++i) {
      const NodeObservation obs{state.I[i], state.V[i]};
      const NodeParams& np = nps[i];

      ControllerMode mode = spec.mode;
      bool strict = true;
      if (policy == SwitchPolicy::RelaxedUntilFeasible) {
        if (!latched[i] && obs.I > eff[i].lo && obs.I < eff[i].hi &&
            obs.V > np.v_l && obs.V < np.v_h) {
          latched[i] = 1;  // permanent
        }
        mode = ControllerMode::Joint;
        strict = latched[i] != 0;
      } else {
        strict = spec.mode != ControllerMode::Relaxed;
        if (!strict) mode = ControllerMode::Joint;
      }

      DutyDecision d;
      if (strict) {
        try {
          d = solve_strict(constraint_interval(obs, np, mode), i + 1);
        } catch (const InfeasibleError& e) {
          std::ostringstream os;
          os << "t = " << t << ": " << e.what();
          throw InfeasibleError(os.str(), e.node);
        }
      } else {
        d = solve_relaxed(obs, np, mode);
      }

      rec.u[i] = d.a;
      rec.eps_l[i] = d.eps_l;
      rec.eps_h[i] = d.eps_h;
      rec.strict_mode[i] = strict ? 1 : 0;

      const BarrierValues bv = barrier_values(obs, np, mode);
      rec.b_l[i] = bv.b_l;
      rec.b_h[i] = bv.b_h;
      rec.B_l[i] = bv.B_l;
      rec.B_h[i] = bv.B_h;
      const double dI = (np.V_s * d.a - obs.V) / params.L[i];
      rec.margin_l[i] = dI + (np.eta_l / params.L[i]) * bv.B_l;
      rec.margin_h[i] = -dI + (np.eta_h / params.L[i]) * bv.B_h;

      rec.viol_voltage[i] = (obs.V < np.v_l || obs.V > np.v_h) ? 1 : 0;
      rec.viol_current[i] = (obs.I < np.I_l || obs.I > np.I_h) ? 1 : 0;
    }

    result.trace.push_back(std::move(rec));

    if (k < steps) {
      try {
        const double h = scenario.dt / scenario.substeps;
        for (int s = 0; s < scenario.substeps; ++s) {
          state = integrate_step(state, result.trace.back().u, plant, B, h);
        }
      } catch (const NumericalDivergenceError& e) {
        std::ostringstream os;
        os << e.what() << " at step " << k + 1;
        throw NumericalDivergenceError(os.str(), k + 1);
      }
    }
  }

  result.report = safety_report(result.trace, params);
  return result;
}

SafetyReport safety_report(const std::vector<TraceRecord>& trace,
                           const GridParameters& params) {
  if (trace.empty()) throw ParameterError("safety_report: empty trace");
  const int n = params.num_nodes();
  const std::size_t nrec = trace.size();

  std::vector<double> t(nrec);
  for (std::size_t k = 0; k < nrec; ++k) t[k] = trace[k].t;

  SafetyReport report;
  report.nodes.resize(n);
  std::vector<double> residual(nrec);
  for (int i = 0; i < n; ++i) {
    NodeSafetySummary& s = report.nodes[i];
    s.min_V = s.max_V = trace[0].V[i];
    s.min_I = s.max_I = trace[0].I[i];
    for (std::size_t k = 0; k < nrec; ++k) {
      s.min_V = std::min(s.min_V, trace[k].V[i]);
      s.max_V = std::max(s.max_V, trace[k].V[i]);
      s.min_I = std::min(s.min_I, trace[k].I[i]);
      s.max_I = std::max(s.max_I, trace[k].I[i]);
    }

    for (std::size_t k = 0; k < nrec; ++k) {
      residual[k] = std::min(trace[k].V[i] - params.v_l[i],
                             params.v_h[i] - trace[k].V[i]);
    }
    scan_violations(t, residual, s.voltage_violations);

    for (std::size_t k = 0; k < nrec; ++k) {
      residual[k] = std::min(trace[k].I[i] - params.I_l[i],
                             params.I_h[i] - trace[k].I[i]);
    }
    scan_violations(t, residual, s.current_violations);

    const double lo = std::max(params.v_l[i] * params.G_l[i], params.I_l[i]);
    const double hi = std::min(params.v_h[i] * params.G_h[i], params.I_h[i]);
    for (std::size_t k = 0; k < nrec; ++k) {
      residual[k] =
          std::min(trace[k].I[i] - lo, hi - trace[k].I[i]);
    }
    scan_violations(t, residual, s.effective_current_violations);

    for (std::size_t k = 0; k < nrec; ++k) {
      if (trace[k].I[i] > lo && trace[k].I[i] < hi &&
          trace[k].V[i] > params.v_l[i] && trace[k].V[i] < params.v_h[i]) {
        s.entered = true;
        s.first_entry = t[k];
        break;
      }
    }
  }
  return report;
}

}  // namespace mgrid
