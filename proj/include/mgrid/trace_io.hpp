#pragma once

#include <string>
#include <vector>

#include "mgrid/sim.hpp"

namespace mgrid {

// Tabular view of the signals that go into the trace file, in the stable
// column order t, I_1..n, V_1..n, u_1..n, eps_l_1..n, eps_h_1..n, mode_1..n.
struct TraceTable {
  int n = 0;
  std::vector<double> t;
  std::vector<Eigen::VectorXd> I, V, u, eps_l, eps_h;
  std::vector<std::vector<std::uint8_t>> mode;

  std::size_t rows() const { return t.size(); }
};

TraceTable to_table(const std::vector<TraceRecord>& trace);

// Comma-separated text with a header row; values are written with enough
// digits to round-trip a double exactly.
void write_trace(const std::string& path, const TraceTable& table);
TraceTable read_trace(const std::string& path);

// Report serialization (JSON).
void write_report(const std::string& path, const SafetyReport& report);
std::string report_to_json(const SafetyReport& report);

}  // namespace mgrid
