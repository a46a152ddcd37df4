#pragma once

#include <stdexcept>
#include <string>

namespace mgrid {

struct TopologyError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ParameterError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DimensionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// The effective current interval [I_tilde_l, I_tilde_h] is inverted, so the
// joint safe set is empty for the offending node.
struct EmptyJointSafeSetError : std::runtime_error {
  explicit EmptyJointSafeSetError(const std::string& msg, int node = -1)
      : std::runtime_error(msg), node(node) {}
  int node;
};

// The strict QP has no feasible duty ratio in [0, 1].
struct InfeasibleError : std::runtime_error {
  explicit InfeasibleError(const std::string& msg, int node = -1)
      : std::runtime_error(msg), node(node) {}
  int node;
};

// State left the representable range during integration.
struct NumericalDivergenceError : std::runtime_error {
  explicit NumericalDivergenceError(const std::string& msg, long step = -1)
      : std::runtime_error(msg), step(step) {}
  long step;
};

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct AssumptionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace mgrid
