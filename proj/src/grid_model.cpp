#include "mgrid/grid_model.hpp"

#include <sstream>

#include "mgrid/errors.hpp"

namespace mgrid {

Eigen::MatrixXd effective_conductance(const GridParameters& params,
                                      const Eigen::MatrixXd& B) {
  const Eigen::Index n = B.rows();
  const Eigen::Index m = B.cols();
  if (params.G.size() != n || params.R.size() != m) {
    throw DimensionError("effective_conductance: parameter sizes do not match B");
  }
  Eigen::MatrixXd Gp = Eigen::MatrixXd::Zero(n, n);
  Gp.diagonal() = params.G;
  // Assemble the line term edge by edge; each edge touches the head/tail rows
  // of its column only, so the result is symmetric with zero rounding skew.
  for (Eigen::Index k = 0; k < m; ++k) {
    Eigen::Index head = -1, tail = -1;
    for (Eigen::Index i = 0; i < n; ++i) {
      if (B(i, k) > 0.5) head = i;
      if (B(i, k) < -0.5) tail = i;
    }
    const double y = 1.0 / params.R[k];
    Gp(head, head) += y;
    Gp(tail, tail) += y;
    Gp(head, tail) -= y;
    Gp(tail, head) -= y;
  }
  return Gp;
}

std::pair<Eigen::VectorXd, Eigen::VectorXd> dynamics(
    const GridState& state, const Eigen::VectorXd& u,
    const GridParameters& params, const Eigen::MatrixXd& B) {
  const Eigen::Index n = B.rows();
  if (state.I.size() != n || state.V.size() != n || u.size() != n) {
    throw DimensionError("dynamics: state/input size does not match topology");
  }
  const Eigen::VectorXd line =
      B * (params.R.cwiseInverse().asDiagonal() * (B.transpose() * state.V));
  Eigen::VectorXd dI =
      (params.V_s.cwiseProduct(u) - state.V).cwiseQuotient(params.L);
  Eigen::VectorXd dV = (state.I - params.G.cwiseProduct(state.V) - line)
                           .cwiseQuotient(params.C);
  return {std::move(dI), std::move(dV)};
}

GridState forced_equilibrium(const Eigen::VectorXd& u_bar,
                             const GridParameters& params,
                             const Eigen::MatrixXd& B) {
  if (u_bar.size() != B.rows()) {
    throw DimensionError("forced_equilibrium: u size does not match topology");
  }
  GridState eq;
  eq.V = params.V_s.cwiseProduct(u_bar);
  eq.I = effective_conductance(params, B) * eq.V;
  return eq;
}

}  // namespace mgrid
