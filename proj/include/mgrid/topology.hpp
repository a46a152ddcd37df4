#pragma once

#include <Eigen/Dense>
#include <utility>
#include <vector>

namespace mgrid {

// One oriented line of the grid graph. Node indices are 1-based; the head
// carries the +1 entry of the incidence matrix, the tail the -1 entry.
struct Edge {
  int head = 0;
  int tail = 0;
};

// Undirected connected graph of DGUs and resistive lines. Orientation of each
// edge is fixed by the (head, tail) order; the physics only sees B R^-1 B^T,
// so results do not depend on the chosen orientation.
struct GridTopology {
  int n = 0;
  std::vector<Edge> edges;

  int num_edges() const { return static_cast<int>(edges.size()); }

  // Throws TopologyError on out-of-range indices, self-loops, or a
  // disconnected graph.
  void validate() const;
  bool is_connected() const;
};

// Signed node-edge incidence matrix, n x m. Entries are exact 0/+1/-1, so
// B^T 1 = 0 holds without rounding.
Eigen::MatrixXd incidence_matrix(const GridTopology& topology);

}  // namespace mgrid
