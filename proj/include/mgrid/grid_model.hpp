#pragma once

#include <Eigen/Dense>
#include <utility>

#include "mgrid/parameters.hpp"
#include "mgrid/topology.hpp"

namespace mgrid {

// Stacked inductor currents and load voltages.
struct GridState {
  Eigen::VectorXd I;
  Eigen::VectorXd V;
};

// Effective conductance G_p = [G] + B R^-1 B^T. Assembled edge by edge so the
// result is symmetric to the last bit; positive definite for valid parameters.
Eigen::MatrixXd effective_conductance(const GridParameters& params,
                                      const Eigen::MatrixXd& B);

// Averaged buck-converter network dynamics:
//   dI/dt = L^-1 (V_s o u - V)
//   dV/dt = C^-1 (I - [G] V - B R^-1 B^T V)
// u is the vector of duty ratios, held constant by the caller.
std::pair<Eigen::VectorXd, Eigen::VectorXd> dynamics(
    const GridState& state, const Eigen::VectorXd& u,
    const GridParameters& params, const Eigen::MatrixXd& B);

// Steady state for a constant duty ratio: V = V_s o u, I = G_p V.
GridState forced_equilibrium(const Eigen::VectorXd& u_bar,
                             const GridParameters& params,
                             const Eigen::MatrixXd& B);

}  // namespace mgrid
