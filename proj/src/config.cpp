#include "mgrid/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "mgrid/controller.hpp"
#include "mgrid/errors.hpp"

namespace mgrid {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

struct SchemaErrors {
  std::vector<std::string> messages;

  void add(const std::string& path, const std::string& what) {
    messages.push_back(path + ": " + what);
  }
  void raise_if_any() const {
    if (messages.empty()) return;
    std::ostringstream os;
    os << "config schema errors:";
    for (const auto& m : messages) os << "\n  " << m;
    throw ConfigError(os.str());
  }
};

void check_keys(const json& obj, const std::string& path,
                const std::set<std::string>& allowed, SchemaErrors& errs) {
  for (const auto& [key, _] : obj.items()) {
    if (!allowed.count(key)) errs.add(path + "." + key, "unknown key");
  }
}

double require_number(const json& obj, const std::string& path,
                      const std::string& key, SchemaErrors& errs) {
  if (!obj.contains(key)) {
    errs.add(path + "." + key, "missing");
    return 0.0;
  }
  if (!obj[key].is_number()) {
    errs.add(path + "." + key, "expected a number");
    return 0.0;
  }
  return obj[key].get<double>();
}

Eigen::VectorXd number_array(const json& arr, const std::string& path, int n,
                             SchemaErrors& errs) {
  Eigen::VectorXd v = Eigen::VectorXd::Zero(n);
  if (!arr.is_array() || static_cast<int>(arr.size()) != n) {
    errs.add(path, "expected an array of " + std::to_string(n) + " numbers");
    return v;
  }
  for (int i = 0; i < n; ++i) {
    if (!arr[i].is_number()) {
      errs.add(path + "[" + std::to_string(i) + "]", "expected a number");
    } else {
      v[i] = arr[i].get<double>();
    }
  }
  return v;
}

ControllerMode parse_mode(const std::string& s, const std::string& path,
                          SchemaErrors& errs) {
  if (s == "known_load") return ControllerMode::KnownLoad;
  if (s == "load_interval") return ControllerMode::LoadInterval;
  if (s == "joint") return ControllerMode::Joint;
  if (s == "relaxed") return ControllerMode::Relaxed;
  errs.add(path, "unknown mode '" + s +
                     "' (expected known_load, load_interval, joint, relaxed)");
  return ControllerMode::Joint;
}

std::string mode_name(ControllerMode m) {
  switch (m) {
    case ControllerMode::KnownLoad: return "known_load";
    case ControllerMode::LoadInterval: return "load_interval";
    case ControllerMode::Joint: return "joint";
    case ControllerMode::Relaxed: return "relaxed";
  }
  return "joint";
}

}  // namespace

ScenarioConfig parse_config_text(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  SchemaErrors errs;
  if (!root.is_object()) throw ConfigError("config root must be an object");
  check_keys(root, "$",
             {"topology", "nodes", "controller", "simulation", "output"}, errs);
  for (const char* key : {"topology", "nodes", "controller", "simulation"}) {
    if (!root.contains(key)) errs.add(std::string("$.") + key, "missing");
  }
  errs.raise_if_any();

  ScenarioConfig cfg;

  // --- topology -------------------------------------------------------------
  {
    const json& topo = root["topology"];
    if (!topo.is_object()) throw ConfigError("$.topology: expected an object");
    check_keys(topo, "$.topology", {"nodes", "edges"}, errs);
    if (!topo.contains("nodes") || !topo["nodes"].is_number_integer()) {
      errs.add("$.topology.nodes", "expected an integer");
    } else {
      cfg.topology.n = topo["nodes"].get<int>();
    }
    if (!topo.contains("edges") || !topo["edges"].is_array()) {
      errs.add("$.topology.edges", "expected an array");
    } else {
      int k = 0;
      std::vector<double> resistances;
      for (const json& e : topo["edges"]) {
        const std::string path = "$.topology.edges[" + std::to_string(k) + "]";
        if (!e.is_object()) {
          errs.add(path, "expected an object");
        } else {
          check_keys(e, path, {"head", "tail", "resistance"}, errs);
          Edge edge;
          if (e.contains("head") && e["head"].is_number_integer())
            edge.head = e["head"].get<int>();
          else
            errs.add(path + ".head", "expected an integer");
          if (e.contains("tail") && e["tail"].is_number_integer())
            edge.tail = e["tail"].get<int>();
          else
            errs.add(path + ".tail", "expected an integer");
          const double r = require_number(e, path, "resistance", errs);
          if (r <= 0.0) errs.add(path + ".resistance", "must be > 0");
          cfg.topology.edges.push_back(edge);
          resistances.push_back(r);
        }
        ++k;
      }
      cfg.params.R = Eigen::Map<Eigen::VectorXd>(resistances.data(),
                                                 resistances.size());
    }
  }
  errs.raise_if_any();
  const int n = cfg.topology.n;

  // --- per-node parameters --------------------------------------------------
  {
    const json& nodes = root["nodes"];
    if (!nodes.is_array() || static_cast<int>(nodes.size()) != n) {
      throw ConfigError("$.nodes: expected an array of " + std::to_string(n) +
                        " node objects");
    }
    GridParameters& p = cfg.params;
    for (auto* v : {&p.L, &p.C, &p.G, &p.G_l, &p.G_h, &p.V_s, &p.v_l, &p.v_h,
                    &p.I_l, &p.I_h}) {
      v->resize(n);
    }
    const std::set<std::string> node_keys = {"L",   "C",   "G",   "G_l", "G_h",
                                             "V_s", "v_l", "v_h", "I_l", "I_h"};
    for (int i = 0; i < n; ++i) {
      const std::string path = "$.nodes[" + std::to_string(i) + "]";
      const json& node = nodes[i];
      if (!node.is_object()) {
        errs.add(path, "expected an object");
        continue;
      }
      check_keys(node, path, node_keys, errs);
      p.L[i] = require_number(node, path, "L", errs);
      p.C[i] = require_number(node, path, "C", errs);
      p.G[i] = require_number(node, path, "G", errs);
      p.G_l[i] = require_number(node, path, "G_l", errs);
      p.G_h[i] = require_number(node, path, "G_h", errs);
      p.V_s[i] = require_number(node, path, "V_s", errs);
      p.v_l[i] = require_number(node, path, "v_l", errs);
      p.v_h[i] = require_number(node, path, "v_h", errs);
      p.I_l[i] = require_number(node, path, "I_l", errs);
      p.I_h[i] = require_number(node, path, "I_h", errs);
      if (p.L[i] <= 0.0) errs.add(path + ".L", "must be > 0");
      if (p.C[i] <= 0.0) errs.add(path + ".C", "must be > 0");
    }
  }

  // --- controller -----------------------------------------------------------
  {
    const json& ctrl = root["controller"];
    if (!ctrl.is_object()) throw ConfigError("$.controller: expected an object");
    check_keys(ctrl, "$.controller", {"mode", "eta_l", "eta_h", "P_l", "P_h"},
               errs);
    if (!ctrl.contains("mode") || !ctrl["mode"].is_string()) {
      errs.add("$.controller.mode", "expected a string");
    } else {
      cfg.scenario.controller.mode =
          parse_mode(ctrl["mode"].get<std::string>(), "$.controller.mode", errs);
    }
    ControllerSpec& spec = cfg.scenario.controller;
    spec.eta_l = ctrl.contains("eta_l")
                     ? number_array(ctrl["eta_l"], "$.controller.eta_l", n, errs)
                     : Eigen::VectorXd();
    spec.eta_h = ctrl.contains("eta_h")
                     ? number_array(ctrl["eta_h"], "$.controller.eta_h", n, errs)
                     : Eigen::VectorXd();
    if (!ctrl.contains("eta_l")) errs.add("$.controller.eta_l", "missing");
    if (!ctrl.contains("eta_h")) errs.add("$.controller.eta_h", "missing");
    for (int i = 0; i < spec.eta_l.size(); ++i) {
      if (spec.eta_l[i] <= 0.0) {
        errs.add("$.controller.eta_l[" + std::to_string(i) + "]",
                 "must be > 0");
      }
    }
    for (int i = 0; i < spec.eta_h.size(); ++i) {
      if (spec.eta_h[i] <= 0.0) {
        errs.add("$.controller.eta_h[" + std::to_string(i) + "]",
                 "must be > 0");
      }
    }
    if (ctrl.contains("P_l")) {
      spec.P_l = number_array(ctrl["P_l"], "$.controller.P_l", n, errs);
    }
    if (ctrl.contains("P_h")) {
      spec.P_h = number_array(ctrl["P_h"], "$.controller.P_h", n, errs);
    }
    for (int i = 0; i < spec.P_l.size(); ++i) {
      if (spec.P_l[i] <= 0.0)
        errs.add("$.controller.P_l[" + std::to_string(i) + "]", "must be > 0");
    }
    for (int i = 0; i < spec.P_h.size(); ++i) {
      if (spec.P_h[i] <= 0.0)
        errs.add("$.controller.P_h[" + std::to_string(i) + "]", "must be > 0");
    }
  }

  // --- simulation -----------------------------------------------------------
  {
    const json& sim = root["simulation"];
    if (!sim.is_object()) throw ConfigError("$.simulation: expected an object");
    check_keys(sim, "$.simulation",
               {"duration", "dt", "substeps", "initial_I", "initial_V",
                "events", "switch_policy"},
               errs);
    Scenario& sc = cfg.scenario;
    sc.duration = require_number(sim, "$.simulation", "duration", errs);
    sc.dt = require_number(sim, "$.simulation", "dt", errs);
    if (sc.dt <= 0.0) errs.add("$.simulation.dt", "must be > 0");
    if (sim.contains("substeps")) {
      if (!sim["substeps"].is_number_integer() ||
          sim["substeps"].get<int>() < 1) {
        errs.add("$.simulation.substeps", "expected an integer >= 1");
      } else {
        sc.substeps = sim["substeps"].get<int>();
      }
    }
    if (sc.duration < sc.dt) {
      errs.add("$.simulation.duration", "must be >= dt");
    }

    if (!sim.contains("initial_I") ||
        (sim["initial_I"].is_string() &&
         sim["initial_I"].get<std::string>() == "auto")) {
      cfg.initial_I_auto = true;
    } else {
      sc.I0 = number_array(sim["initial_I"], "$.simulation.initial_I", n, errs);
    }
    if (sim.contains("initial_V")) {
      sc.V0 = number_array(sim["initial_V"], "$.simulation.initial_V", n, errs);
    } else {
      sc.V0 = 0.5 * (cfg.params.v_l + cfg.params.v_h);  // mid-band default
    }

    if (sim.contains("events")) {
      if (!sim["events"].is_array()) {
        errs.add("$.simulation.events", "expected an array");
      } else {
        int k = 0;
        for (const json& e : sim["events"]) {
          const std::string path =
              "$.simulation.events[" + std::to_string(k) + "]";
          if (!e.is_object()) {
            errs.add(path, "expected an object");
          } else {
            check_keys(e, path, {"time", "load_scale"}, errs);
            LoadScaleEvent ev;
            ev.time = require_number(e, path, "time", errs);
            ev.factor = require_number(e, path, "load_scale", errs);
            if (ev.factor <= 0.0) errs.add(path + ".load_scale", "must be > 0");
            if (ev.time < 0.0 || ev.time > sc.duration) {
              errs.add(path + ".time", "outside [0, duration]");
            }
            sc.events.push_back(ev);
          }
          ++k;
        }
      }
    }

    if (sim.contains("switch_policy")) {
      if (!sim["switch_policy"].is_string()) {
        errs.add("$.simulation.switch_policy", "expected a string");
      } else {
        const std::string s = sim["switch_policy"].get<std::string>();
        if (s == "always_strict") {
          sc.switch_policy = SwitchPolicy::AlwaysStrict;
        } else if (s == "relaxed_until_feasible") {
          sc.switch_policy = SwitchPolicy::RelaxedUntilFeasible;
        } else {
          errs.add("$.simulation.switch_policy",
                   "expected always_strict or relaxed_until_feasible");
        }
      }
    }

    const bool needs_P =
        sc.switch_policy == SwitchPolicy::RelaxedUntilFeasible ||
        sc.controller.mode == ControllerMode::Relaxed;
    if (needs_P &&
        (cfg.scenario.controller.P_l.size() != n ||
         cfg.scenario.controller.P_h.size() != n)) {
      errs.add("$.controller",
               "P_l and P_h are required for the relaxed controller");
    }
  }

  // --- output ---------------------------------------------------------------
  if (root.contains("output")) {
    const json& out = root["output"];
    if (!out.is_object()) throw ConfigError("$.output: expected an object");
    check_keys(out, "$.output", {"trace", "report", "plots"}, errs);
    if (out.contains("trace")) {
      if (out["trace"].is_string())
        cfg.trace_path = out["trace"].get<std::string>();
      else
        errs.add("$.output.trace", "expected a string");
    }
    if (out.contains("report")) {
      if (out["report"].is_string())
        cfg.report_path = out["report"].get<std::string>();
      else
        errs.add("$.output.report", "expected a string");
    }
    if (out.contains("plots")) {
      if (out["plots"].is_boolean())
        cfg.plots = out["plots"].get<bool>();
      else
        errs.add("$.output.plots", "expected a boolean");
    }
  }

  errs.raise_if_any();

  // Structural validation (throws TopologyError / DimensionError, reported as
  // schema problems by the CLI).
  cfg.topology.validate();
  cfg.params.validate_shape(cfg.topology);

  const ValidationReport rep = validate_assumptions(cfg.params);
  if (!rep.all_pass()) {
    throw AssumptionError("parameters violate model assumptions:\n" +
                          rep.summary());
  }

  if (cfg.initial_I_auto) {
    cfg.scenario.I0.resize(n);
    for (int i = 0; i < n; ++i) {
      const EffectiveCurrentBounds b = effective_current_bounds(
          cfg.params.v_l[i], cfg.params.v_h[i], cfg.params.G_l[i],
          cfg.params.G_h[i], cfg.params.I_l[i], cfg.params.I_h[i], i + 1);
      cfg.scenario.I0[i] = 0.95 * b.lo;  // just outside the safe current band
    }
  }

  return cfg;
}

ScenarioConfig parse_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str());
}

std::string write_config(const ScenarioConfig& cfg) {
  ordered_json root;
  const int n = cfg.topology.n;

  root["topology"]["nodes"] = n;
  root["topology"]["edges"] = ordered_json::array();
  for (int k = 0; k < cfg.topology.num_edges(); ++k) {
    root["topology"]["edges"].push_back({{"head", cfg.topology.edges[k].head},
                                         {"tail", cfg.topology.edges[k].tail},
                                         {"resistance", cfg.params.R[k]}});
  }

  root["nodes"] = ordered_json::array();
  for (int i = 0; i < n; ++i) {
    const GridParameters& p = cfg.params;
    root["nodes"].push_back({{"L", p.L[i]},
                             {"C", p.C[i]},
                             {"G", p.G[i]},
                             {"G_l", p.G_l[i]},
                             {"G_h", p.G_h[i]},
                             {"V_s", p.V_s[i]},
                             {"v_l", p.v_l[i]},
                             {"v_h", p.v_h[i]},
                             {"I_l", p.I_l[i]},
                             {"I_h", p.I_h[i]}});
  }

  const ControllerSpec& spec = cfg.scenario.controller;
  root["controller"]["mode"] = mode_name(spec.mode);
  auto vec = [](const Eigen::VectorXd& v) {
    ordered_json arr = ordered_json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v[i]);
    return arr;
  };
  root["controller"]["eta_l"] = vec(spec.eta_l);
  root["controller"]["eta_h"] = vec(spec.eta_h);
  if (spec.P_l.size() > 0) root["controller"]["P_l"] = vec(spec.P_l);
  if (spec.P_h.size() > 0) root["controller"]["P_h"] = vec(spec.P_h);

  const Scenario& sc = cfg.scenario;
  root["simulation"]["duration"] = sc.duration;
  root["simulation"]["dt"] = sc.dt;
  root["simulation"]["substeps"] = sc.substeps;
  if (cfg.initial_I_auto) {
    root["simulation"]["initial_I"] = "auto";
  } else {
    root["simulation"]["initial_I"] = vec(sc.I0);
  }
  root["simulation"]["initial_V"] = vec(sc.V0);
  root["simulation"]["events"] = ordered_json::array();
  for (const auto& ev : sc.events) {
    root["simulation"]["events"].push_back(
        {{"time", ev.time}, {"load_scale", ev.factor}});
  }
  root["simulation"]["switch_policy"] =
      sc.switch_policy == SwitchPolicy::AlwaysStrict ? "always_strict"
                                                     : "relaxed_until_feasible";

  root["output"]["trace"] = cfg.trace_path;
  root["output"]["report"] = cfg.report_path;
  root["output"]["plots"] = cfg.plots;

  return root.dump(2);
}

}  // namespace mgrid
