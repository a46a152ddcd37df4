#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <random>
#include <string>

#include <CLI11.hpp>

#include "mgrid/config.hpp"
#include "mgrid/controller.hpp"
#include "mgrid/errors.hpp"
#include "mgrid/grid_model.hpp"
#include "mgrid/sim.hpp"
#include "mgrid/svg_plot.hpp"
#include "mgrid/trace_io.hpp"

namespace fs = std::filesystem;
using namespace mgrid;

namespace {

std::string resolve_out_dir(const std::string& flag_value) {
  if (!flag_value.empty()) return flag_value;
  if (const char* env = std::getenv("MGRID_OUT_DIR"); env && *env) return env;
  return ".";
}

int require_file(const std::string& path) {
  if (!fs::exists(path)) {
    std::cerr << "error: no such file: " << path << '\n';
    return kExitUsage;
  }
  return kExitOk;
}

bool has_post_entry_violations(const SafetyReport& report) {
  for (const auto& node : report.nodes) {
    if (!node.entered) continue;
    for (const auto* list :
         {&node.voltage_violations, &node.effective_current_violations}) {
      for (const auto& iv : *list) {
        if (iv.t_end > node.first_entry) return true;
      }
    }
  }
  return false;
}

int cmd_run(const std::string& config_path, double dt_override,
            double duration_override, const std::string& out_flag,
            long seed, bool has_seed) {
  if (int rc = require_file(config_path); rc != kExitOk) return rc;
  ScenarioConfig cfg = parse_config(config_path);
  if (dt_override > 0.0) cfg.scenario.dt = dt_override;
  if (duration_override > 0.0) {
    cfg.scenario.duration = duration_override;
    // A shortened horizon may strand configured events; drop them instead of
    // rejecting the otherwise-valid config.
    auto& events = cfg.scenario.events;
    const auto past = std::remove_if(
        events.begin(), events.end(), [&](const LoadScaleEvent& ev) {
          return ev.time > cfg.scenario.duration;
        });
    if (past != events.end()) {
      std::cerr << "warning: dropping " << events.end() - past
                << " event(s) beyond the overridden duration\n";
      events.erase(past, events.end());
    }
  }

  if (has_seed) {
    // Randomized driver hook: jitter the initial state inside/near the safe
    // set so repeated runs explore different transients.
    std::mt19937_64 rng(static_cast<std::uint64_t>(seed));
    std::uniform_real_distribution<double> uI(0.90, 0.95);
    std::uniform_real_distribution<double> uV(-0.5, 0.5);
    for (int i = 0; i < cfg.topology.n; ++i) {
      const EffectiveCurrentBounds b = effective_current_bounds(
          cfg.params.v_l[i], cfg.params.v_h[i], cfg.params.G_l[i],
          cfg.params.G_h[i], cfg.params.I_l[i], cfg.params.I_h[i], i + 1);
      cfg.scenario.I0[i] = uI(rng) * b.lo;
      cfg.scenario.V0[i] += uV(rng);
    }
  }

  const std::string out_dir = resolve_out_dir(out_flag);
  fs::create_directories(out_dir);

  SimResult result = run_scenario(cfg.scenario, cfg.params, cfg.topology);
  for (const auto& w : result.warnings) std::cerr << "warning: " << w << '\n';

  const TraceTable table = to_table(result.trace);
  const std::string trace_path = (fs::path(out_dir) / cfg.trace_path).string();
  const std::string report_path =
      (fs::path(out_dir) / cfg.report_path).string();
  write_trace(trace_path, table);
  write_report(report_path, result.report);
  if (cfg.plots) emit_plots(table, cfg.params, out_dir);

  std::cout << "trace:  " << trace_path << '\n'
            << "report: " << report_path << '\n';
  for (std::size_t i = 0; i < result.report.nodes.size(); ++i) {
    const auto& node = result.report.nodes[i];
    std::cout << "node " << i + 1 << ": V in [" << node.min_V << ", "
              << node.max_V << "], I in [" << node.min_I << ", " << node.max_I
              << "]";
    if (node.entered) {
      std::cout << ", entered joint safe set at t = " << node.first_entry;
    } else {
      std::cout << ", never entered joint safe set";
    }
    std::cout << '\n';
  }

  return has_post_entry_violations(result.report) ? 1 : kExitOk;
}

int cmd_equilibrium(const std::string& config_path, double target) {
  if (int rc = require_file(config_path); rc != kExitOk) return rc;
  ScenarioConfig cfg = parse_config(config_path);
  const double min_Vs = cfg.params.V_s.minCoeff();
  if (!(target > 0.0 && target < min_Vs)) {
    std::cerr << "error: target voltage must lie in (0, min V_s = " << min_Vs
              << ")\n";
    return kExitUsage;
  }
  const Eigen::MatrixXd B = incidence_matrix(cfg.topology);
  const Eigen::VectorXd u_bar =
      (target * Eigen::VectorXd::Ones(cfg.topology.n)).cwiseQuotient(
          cfg.params.V_s);
  const GridState eq = forced_equilibrium(u_bar, cfg.params, B);
  std::cout << "target voltage: " << target << " V\n";
  for (int i = 0; i < cfg.topology.n; ++i) {
    std::cout << "node " << i + 1 << ": u = " << u_bar[i]
              << "  V = " << eq.V[i] << "  I = " << eq.I[i] << '\n';
    const EffectiveCurrentBounds b = effective_current_bounds(
        cfg.params.v_l[i], cfg.params.v_h[i], cfg.params.G_l[i],
        cfg.params.G_h[i], cfg.params.I_l[i], cfg.params.I_h[i], i + 1);
    if (eq.I[i] < b.lo || eq.I[i] > b.hi) {
      std::cout << "  warning: equilibrium current outside [" << b.lo << ", "
                << b.hi << "]\n";
    }
  }
  return kExitOk;
}

int cmd_validate(const std::string& config_path) {
  if (int rc = require_file(config_path); rc != kExitOk) return rc;
  parse_config(config_path);  // throws on any problem
  std::cout << "config ok\n";
  return kExitOk;
}

int cmd_plot(const std::string& config_path, const std::string& trace_path,
             const std::string& out_flag) {
  if (int rc = require_file(config_path); rc != kExitOk) return rc;
  if (int rc = require_file(trace_path); rc != kExitOk) return rc;
  ScenarioConfig cfg = parse_config(config_path);
  const TraceTable table = read_trace(trace_path);
  const std::string out_dir = resolve_out_dir(out_flag);
  emit_plots(table, cfg.params, out_dir);
  std::cout << "plots written to " << out_dir << '\n';
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"DC microgrid CBF safety-filter simulator"};
  app.require_subcommand(1);

  std::string config_path, trace_path, out_dir;
  double dt_override = 0.0, duration_override = 0.0, target = 230.0;
  long seed = 0;

  auto* run = app.add_subcommand("run", "Run a scenario and write trace/report");
  run->add_option("config", config_path, "scenario config file")->required();
  run->add_option("--dt", dt_override, "override integration step (s)");
  run->add_option("--duration", duration_override, "override duration (s)");
  run->add_option("--out", out_dir, "output directory (or MGRID_OUT_DIR)");
  auto* seed_opt =
      run->add_option("--seed", seed, "randomize the initial state");

  auto* eq = app.add_subcommand("equilibrium",
                                "Print the forced equilibrium for a target voltage");
  eq->add_option("config", config_path, "scenario config file")->required();
  eq->add_option("--target", target, "target load voltage (V)")->required();

  auto* val = app.add_subcommand("validate", "Validate a scenario config");
  val->add_option("config", config_path, "scenario config file")->required();

  auto* plot = app.add_subcommand("plot", "Render SVG charts from a trace");
  plot->add_option("config", config_path, "scenario config file")->required();
  plot->add_option("trace", trace_path, "trace file from `run`")->required();
  plot->add_option("--out", out_dir, "output directory (or MGRID_OUT_DIR)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) {
      return cmd_run(config_path, dt_override, duration_override, out_dir,
                     seed, seed_opt->count() > 0);
    }
    if (eq->parsed()) return cmd_equilibrium(config_path, target);
    if (val->parsed()) return cmd_validate(config_path);
    if (plot->parsed()) return cmd_plot(config_path, trace_path, out_dir);
  } catch (const AssumptionError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitAssumption;
  } catch (const NumericalDivergenceError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const InfeasibleError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInfeasible;
  } catch (const EmptyJointSafeSetError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInfeasible;
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitSchema;
  } catch (const TopologyError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitSchema;
  } catch (const DimensionError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitSchema;
  } catch (const ParameterError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitSchema;
  }
  return kExitUsage;
}
