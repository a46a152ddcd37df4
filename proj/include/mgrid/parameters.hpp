#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "mgrid/topology.hpp"

namespace mgrid {

// Electrical constants of the grid. L, C, G are diagonal by construction and
// stored as per-node vectors; R holds one line resistance per edge.
struct GridParameters {
  Eigen::VectorXd L;    // filter inductance (H)
  Eigen::VectorXd C;    // shunt capacitance (F)
  Eigen::VectorXd G;    // load conductance (S)
  Eigen::VectorXd G_l;  // lower load-conductance bound (S)
  Eigen::VectorXd G_h;  // upper load-conductance bound (S)
  Eigen::VectorXd V_s;  // source voltage (V)
  Eigen::VectorXd v_l;  // lower voltage bound (V)
  Eigen::VectorXd v_h;  // upper voltage bound (V)
  Eigen::VectorXd I_l;  // lower current bound (A)
  Eigen::VectorXd I_h;  // upper current bound (A)
  Eigen::VectorXd R;    // line resistance (Ohm), per edge

  int num_nodes() const { return static_cast<int>(L.size()); }

  // Dimension consistency against a topology. Throws DimensionError.
  void validate_shape(const GridTopology& topology) const;
};

struct AssumptionCheck {
  std::string name;
  bool pass = true;
  std::vector<int> failing_nodes;  // 1-based; empty on pass
};

struct ValidationReport {
  std::vector<AssumptionCheck> checks;
  bool all_pass() const;
  std::string summary() const;
};

// Named pass/fail checks: strict positivity of L, C, G, G_l, G_h, R, the load
// interval G_l <= G <= G_h, the ordering v_l <= v_h < V_s, and I_l <= I_h.
// Never throws; failures become report entries with offending node indices.
ValidationReport validate_assumptions(const GridParameters& params);

}  // namespace mgrid
