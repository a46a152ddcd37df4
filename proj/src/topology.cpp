#include "mgrid/topology.hpp"

#include <numeric>
#include <string>
#include <vector>

#include "mgrid/errors.hpp"

namespace mgrid {

void GridTopology::validate() const {
  if (n < 1) throw TopologyError("topology: node count must be >= 1");
  for (std::size_t k = 0; k < edges.size(); ++k) {
    const Edge& e = edges[k];
    if (e.head < 1 || e.head > n || e.tail < 1 || e.tail > n) {
      throw TopologyError("topology: edge " + std::to_string(k + 1) +
                          " references node outside [1, " + std::to_string(n) +
                          "]");
    }
    if (e.head == e.tail) {
      throw TopologyError("topology: edge " + std::to_string(k + 1) +
                          " is a self-loop at node " + std::to_string(e.head));
    }
  }
  if (!is_connected()) throw TopologyError("topology: graph is not connected");
}

bool GridTopology::is_connected() const {
  if (n < 1) return false;
  std::vector<std::vector<int>> adj(n);
  for (const Edge& e : edges) {
    adj[e.head - 1].push_back(e.tail - 1);
    adj[e.tail - 1].push_back(e.head - 1);
  }
  std::vector<char> seen(n, 0);
  std::vector<int> stack{0};
  seen[0] = 1;
  int count = 1;
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    for (int w : adj[v]) {
      if (!seen[w]) {
        seen[w] = 1;
        ++count;
        stack.push_back(w);
      }
    }
  }
  return count == n;
}

Eigen::MatrixXd incidence_matrix(const GridTopology& topology) {
  topology.validate();
  const int m = topology.num_edges();
  Eigen::MatrixXd B = Eigen::MatrixXd::Zero(topology.n, m);
  for (int k = 0; k < m; ++k) {
    B(topology.edges[k].head - 1, k) = 1.0;
    B(topology.edges[k].tail - 1, k) = -1.0;
  }
  return B;
}

}  // namespace mgrid
