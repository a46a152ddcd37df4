#include "mgrid/trace_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "mgrid/errors.hpp"

namespace mgrid {

namespace {

std::string fmt_double(double x) {
  char buf[40];
  // %.17g round-trips any double exactly.
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string field;
  while (std::getline(ss, field, ',')) out.push_back(field);
  return out;
}

}  // namespace

TraceTable to_table(const std::vector<TraceRecord>& trace) {
  TraceTable tab;
  if (trace.empty()) return tab;
  tab.n = static_cast<int>(trace.front().I.size());
  tab.t.reserve(trace.size());
  for (const TraceRecord& r : trace) {
    tab.t.push_back(r.t);
    tab.I.push_back(r.I);
    tab.V.push_back(r.V);
    tab.u.push_back(r.u);
    tab.eps_l.push_back(r.eps_l);
    tab.eps_h.push_back(r.eps_h);
    tab.mode.push_back(r.strict_mode);
  }
  return tab;
}

void write_trace(const std::string& path, const TraceTable& tab) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot open trace file for writing: " + path);
  const int n = tab.n;
  out << "t";
  const char* groups[] = {"I", "V", "u", "eps_l", "eps_h", "mode"};
  for (const char* g : groups) {
    for (int i = 1; i <= n; ++i) out << ',' << g << '_' << i;
  }
  out << '\n';
  for (std::size_t k = 0; k < tab.rows(); ++k) {
    out << fmt_double(tab.t[k]);
    for (int i = 0; i < n; ++i) out << ',' << fmt_double(tab.I[k][i]);
    for (int i = 0; i < n; ++i) out << ',' << fmt_double(tab.V[k][i]);
    for (int i = 0; i < n; ++i) out << ',' << fmt_double(tab.u[k][i]);
    for (int i = 0; i < n; ++i) out << ',' << fmt_double(tab.eps_l[k][i]);
    for (int i = 0; i < n; ++i) out << ',' << fmt_double(tab.eps_h[k][i]);
    for (int i = 0; i < n; ++i) out << ',' << int(tab.mode[k][i]);
    out << '\n';
  }
}

TraceTable read_trace(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open trace file: " + path);
  std::string line;
  if (!std::getline(in, line)) throw ConfigError("trace file is empty: " + path);
  const auto header = split_csv(line);
  if (header.empty() || header[0] != "t" || (header.size() - 1) % 6 != 0) {
    throw ConfigError("malformed trace header in " + path);
  }
  TraceTable tab;
  tab.n = static_cast<int>((header.size() - 1) / 6);
  const int n = tab.n;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto fields = split_csv(line);
    if (fields.size() != header.size()) {
      throw ConfigError("trace row " + std::to_string(lineno) +
                        " has wrong column count in " + path);
    }
    auto parse = [&](const std::string& s) {
      std::size_t pos = 0;
      double v = 0.0;
      try {
        v = std::stod(s, &pos);
      } catch (const std::exception&) {
        throw ConfigError("trace row " + std::to_string(lineno) +
                          ": not a number: '" + s + "'");
      }
      if (pos != s.size()) {
        throw ConfigError("trace row " + std::to_string(lineno) +
                          ": trailing characters in '" + s + "'");
      }
      return v;
    };
    std::size_t f = 0;
    tab.t.push_back(parse(fields[f++]));
    auto take_vec = [&]() {
      Eigen::VectorXd v(n);
      for (int i = 0; i < n; ++i) v[i] = parse(fields[f++]);
      return v;
    };
    tab.I.push_back(take_vec());
    tab.V.push_back(take_vec());
    tab.u.push_back(take_vec());
    tab.eps_l.push_back(take_vec());
    tab.eps_h.push_back(take_vec());
    std::vector<std::uint8_t> m(n);
    for (int i = 0; i < n; ++i) m[i] = fields[f++] == "1" ? 1 : 0;
    tab.mode.push_back(std::move(m));
  }
  return tab;
}

std::string report_to_json(const SafetyReport& report) {
  nlohmann::ordered_json j;
  j["nodes"] = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < report.nodes.size(); ++i) {
    const NodeSafetySummary& s = report.nodes[i];
    nlohmann::ordered_json node;
    node["node"] = i + 1;
    node["min_V"] = s.min_V;
    node["max_V"] = s.max_V;
    node["min_I"] = s.min_I;
    node["max_I"] = s.max_I;
    auto intervals = [](const std::vector<ViolationInterval>& v) {
      nlohmann::ordered_json arr = nlohmann::ordered_json::array();
      for (const auto& iv : v) {
        arr.push_back({{"begin", iv.t_begin}, {"end", iv.t_end}});
      }
      return arr;
    };
    node["voltage_violations"] = intervals(s.voltage_violations);
    node["current_violations"] = intervals(s.current_violations);
    node["effective_current_violations"] =
        intervals(s.effective_current_violations);
    node["entered_joint_safe_set"] = s.entered;
    if (s.entered) node["first_entry"] = s.first_entry;
    j["nodes"].push_back(std::move(node));
  }
  return j.dump(2);
}

void write_report(const std::string& path, const SafetyReport& report) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot open report file for writing: " + path);
  out << report_to_json(report) << '\n';
}

}  // namespace mgrid
