#pragma once

#include <string>

#include "mgrid/parameters.hpp"
#include "mgrid/sim.hpp"
#include "mgrid/topology.hpp"

namespace mgrid {

// Stable CLI exit codes.
enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 1,        // missing file / bad invocation
  kExitSchema = 2,       // config schema violation
  kExitAssumption = 3,   // assumption validation failed
  kExitNumerical = 4,    // numerical divergence
  kExitInfeasible = 5,   // strict QP infeasible on a latched node
};

struct ScenarioConfig {
  GridTopology topology;
  GridParameters params;
  Scenario scenario;
  std::string trace_path = "trace.csv";
  std::string report_path = "report.json";
  bool plots = false;
  bool initial_I_auto = false;  // I0 derived as 0.95 * Itl at parse time
};

// Parses and fully validates a scenario file. Unknown keys are rejected.
// Throws ConfigError (schema, with field paths in the message) or
// AssumptionError (parameters violate the model assumptions).
ScenarioConfig parse_config(const std::string& path);
ScenarioConfig parse_config_text(const std::string& text);

// Inverse of parse_config_text; parse(write(x)) == x for valid configs.
std::string write_config(const ScenarioConfig& config);

}  // namespace mgrid
