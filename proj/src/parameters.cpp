#include "mgrid/parameters.hpp"

#include <sstream>

#include "mgrid/errors.hpp"

namespace mgrid {

void GridParameters::validate_shape(const GridTopology& topology) const {
  const auto n = static_cast<Eigen::Index>(topology.n);
  const auto m = static_cast<Eigen::Index>(topology.num_edges());
  auto check = [&](const Eigen::VectorXd& v, Eigen::Index want,
                   const char* name) {
    if (v.size() != want) {
      std::ostringstream os;
      os << "parameters: " << name << " has length " << v.size()
         << ", expected " << want;
      throw DimensionError(os.str());
    }
  };
  check(L, n, "L");
  check(C, n, "C");
  check(G, n, "G");
  check(G_l, n, "G_l");
  check(G_h, n, "G_h");
  check(V_s, n, "V_s");
  check(v_l, n, "v_l");
  check(v_h, n, "v_h");
  check(I_l, n, "I_l");
  check(I_h, n, "I_h");
  check(R, m, "R");
}

bool ValidationReport::all_pass() const {
  for (const auto& c : checks)
    if (!c.pass) return false;
  return true;
}

std::string ValidationReport::summary() const {
  std::ostringstream os;
  for (const auto& c : checks) {
    os << (c.pass ? "pass" : "FAIL") << "  " << c.name;
    if (!c.pass) {
      os << "  (nodes:";
      for (int i : c.failing_nodes) os << ' ' << i;
      os << ')';
    }
    os << '\n';
  }
  return os.str();
}

namespace {

AssumptionCheck elementwise_check(const std::string& name,
                                  const Eigen::VectorXd& v,
                                  bool (*pred)(double)) {
  AssumptionCheck c{name, true, {}};
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (!pred(v[i])) {
      c.pass = false;
      c.failing_nodes.push_back(static_cast<int>(i) + 1);
    }
  }
  return c;
}

bool positive(double x) { return x > 0.0; }

}  // namespace

ValidationReport validate_assumptions(const GridParameters& p) {
  ValidationReport rep;
  rep.checks.push_back(elementwise_check("L > 0", p.L, positive));
  rep.checks.push_back(elementwise_check("C > 0", p.C, positive));
  rep.checks.push_back(elementwise_check("G > 0", p.G, positive));
  rep.checks.push_back(elementwise_check("G_l > 0", p.G_l, positive));
  rep.checks.push_back(elementwise_check("G_h > 0", p.G_h, positive));

  {
    // Line positivity is reported per edge; reuse the node field for indices.
    AssumptionCheck c{"R > 0", true, {}};
    for (Eigen::Index k = 0; k < p.R.size(); ++k) {
      if (!(p.R[k] > 0.0)) {
        c.pass = false;
        c.failing_nodes.push_back(static_cast<int>(k) + 1);
      }
    }
    rep.checks.push_back(c);
  }

  {
    AssumptionCheck c{"load interval G_l <= G <= G_h", true, {}};
    for (Eigen::Index i = 0; i < p.G.size(); ++i) {
      if (!(p.G_l[i] <= p.G[i] && p.G[i] <= p.G_h[i])) {
        c.pass = false;
        c.failing_nodes.push_back(static_cast<int>(i) + 1);
      }
    }
    rep.checks.push_back(c);
  }

  {
    AssumptionCheck c{"voltage bounds v_l <= v_h < V_s", true, {}};
    for (Eigen::Index i = 0; i < p.v_l.size(); ++i) {
      if (!(p.v_l[i] <= p.v_h[i] && p.v_h[i] < p.V_s[i])) {
        c.pass = false;
        c.failing_nodes.push_back(static_cast<int>(i) + 1);
      }
    }
    rep.checks.push_back(c);
  }

  {
    AssumptionCheck c{"current bounds I_l <= I_h", true, {}};
    for (Eigen::Index i = 0; i < p.I_l.size(); ++i) {
      if (!(p.I_l[i] <= p.I_h[i])) {
        c.pass = false;
        c.failing_nodes.push_back(static_cast<int>(i) + 1);
      }
    }
    rep.checks.push_back(c);
  }

  return rep;
}

}  // namespace mgrid
