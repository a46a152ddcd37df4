#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

#include "mgrid/config.hpp"
#include "mgrid/errors.hpp"
#include "mgrid/trace_io.hpp"
#include "test_util.hpp"

using namespace mgrid;
using namespace mgrid_test;
using nlohmann::json;

namespace {

std::string scenario_text() {
  std::ifstream in(MGRID_SCENARIO_FILE);
  REQUIRE(in.good());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("the shipped scenario file parses and matches the fixtures") {
  const ScenarioConfig cfg = parse_config(MGRID_SCENARIO_FILE);
  CHECK(cfg.topology.n == 4);
  CHECK(cfg.topology.num_edges() == 4);

  const GridParameters want = ring4_params();
  CHECK((cfg.params.L - want.L).cwiseAbs().maxCoeff() == 0.0);
  CHECK((cfg.params.C - want.C).cwiseAbs().maxCoeff() == 0.0);
  CHECK((cfg.params.G - want.G).cwiseAbs().maxCoeff() <= 1e-17);
  CHECK((cfg.params.R - want.R).cwiseAbs().maxCoeff() == 0.0);
  CHECK((cfg.params.I_l - want.I_l).cwiseAbs().maxCoeff() == 0.0);
  CHECK((cfg.params.I_h - want.I_h).cwiseAbs().maxCoeff() == 0.0);

  CHECK(cfg.scenario.controller.mode == ControllerMode::Joint);
  CHECK(cfg.scenario.switch_policy == SwitchPolicy::RelaxedUntilFeasible);
  CHECK(cfg.scenario.duration == 0.5);
  CHECK(cfg.scenario.dt == 1e-5);
  REQUIRE(cfg.scenario.events.size() == 1);
  CHECK(cfg.scenario.events[0].time == 0.25);
  CHECK(cfg.scenario.events[0].factor == 1.05);

  // "auto" initial current: 0.95 of the effective lower bound per node.
  CHECK(cfg.initial_I_auto);
  REQUIRE(cfg.scenario.I0.size() == 4);
  CHECK(cfg.scenario.I0[0] ==
        doctest::Approx(0.95 * 13.026946107784431).epsilon(1e-12));
  CHECK(cfg.scenario.I0[1] == doctest::Approx(0.95 * 4.4).epsilon(1e-12));
  CHECK(cfg.scenario.V0 == Eigen::VectorXd::Constant(4, 230.0));
}

TEST_CASE("schema violations are collected with field paths") {
  const std::string base = scenario_text();

  SUBCASE("unknown top-level key") {
    json j = json::parse(base);
    j["extra"] = 1;
    try {
      parse_config_text(j.dump());
      FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
      CHECK(std::string(e.what()).find("$.extra") != std::string::npos);
    }
  }
  SUBCASE("unknown node key") {
    json j = json::parse(base);
    j["nodes"][2]["Z"] = 1.0;
    try {
      parse_config_text(j.dump());
      FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
      CHECK(std::string(e.what()).find("$.nodes[2].Z") != std::string::npos);
    }
  }
  SUBCASE("nonpositive inductance") {
    json j = json::parse(base);
    j["nodes"][0]["L"] = -1.0;
    try {
      parse_config_text(j.dump());
      FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
      CHECK(std::string(e.what()).find("$.nodes[0].L") != std::string::npos);
    }
  }
  SUBCASE("wrong array length") {
    json j = json::parse(base);
    j["controller"]["eta_l"] = {0.5, 0.4};
    CHECK_THROWS_AS(parse_config_text(j.dump()), ConfigError);
  }
  SUBCASE("unknown mode string") {
    json j = json::parse(base);
    j["controller"]["mode"] = "turbo";
    CHECK_THROWS_AS(parse_config_text(j.dump()), ConfigError);
  }
  SUBCASE("nonpositive gain") {
    json j = json::parse(base);
    j["controller"]["eta_h"][1] = 0.0;
    CHECK_THROWS_AS(parse_config_text(j.dump()), ConfigError);
  }
  SUBCASE("missing penalties under the relaxed policy") {
    json j = json::parse(base);
    j["controller"].erase("P_l");
    CHECK_THROWS_AS(parse_config_text(j.dump()), ConfigError);
  }
  SUBCASE("event after the horizon") {
    json j = json::parse(base);
    j["simulation"]["events"][0]["time"] = 0.9;
    CHECK_THROWS_AS(parse_config_text(j.dump()), ConfigError);
  }
  SUBCASE("not JSON at all") {
    CHECK_THROWS_AS(parse_config_text("not json {"), ConfigError);
  }
}

TEST_CASE("assumption violations are distinct from schema errors") {
  json j = json::parse(scenario_text());
  j["nodes"][1]["v_h"] = 400.0;  // above V_s = 380
  CHECK_THROWS_AS(parse_config_text(j.dump()), AssumptionError);

  json k = json::parse(scenario_text());
  k["nodes"][3]["G_l"] = 0.06;  // above G
  CHECK_THROWS_AS(parse_config_text(k.dump()), AssumptionError);
}

TEST_CASE("empty joint safe set is rejected at parse time") {
  json j = json::parse(scenario_text());
  // v_h G_h < I_l at node 0 makes the effective band empty, which the "auto"
  // initial current needs.
  j["nodes"][0]["I_l"] = 20.0;
  j["nodes"][0]["I_h"] = 21.0;
  CHECK_THROWS_AS(parse_config_text(j.dump()), EmptyJointSafeSetError);
}

TEST_CASE("write/parse round trip preserves the configuration") {
  const ScenarioConfig cfg = parse_config(MGRID_SCENARIO_FILE);
  const ScenarioConfig back = parse_config_text(write_config(cfg));

  CHECK(back.topology.n == cfg.topology.n);
  CHECK(back.params.L == cfg.params.L);
  CHECK(back.params.G == cfg.params.G);
  CHECK(back.params.R == cfg.params.R);
  CHECK(back.scenario.duration == cfg.scenario.duration);
  CHECK(back.scenario.dt == cfg.scenario.dt);
  CHECK(back.scenario.controller.mode == cfg.scenario.controller.mode);
  CHECK(back.scenario.controller.eta_l == cfg.scenario.controller.eta_l);
  CHECK(back.scenario.controller.P_l == cfg.scenario.controller.P_l);
  CHECK(back.scenario.I0 == cfg.scenario.I0);
  CHECK(back.scenario.V0 == cfg.scenario.V0);
  CHECK(back.initial_I_auto == cfg.initial_I_auto);
  REQUIRE(back.scenario.events.size() == cfg.scenario.events.size());
  CHECK(back.scenario.events[0].time == cfg.scenario.events[0].time);
  CHECK(back.trace_path == cfg.trace_path);
  CHECK(back.report_path == cfg.report_path);
}

TEST_CASE("trace CSV round trip is bit exact") {
  const GridTopology t = ring4_topology();
  const GridParameters p = ring4_params();
  Scenario sc;
  sc.duration = 0.002;
  sc.dt = 1e-5;
  sc.I0.resize(4);
  sc.I0 << 12.3, 4.1, 12.7, 10.4;
  sc.V0 = Eigen::VectorXd::Constant(4, 230.0);
  sc.controller = ring4_controller();
  const SimResult r = run_scenario(sc, p, t);

  const TraceTable table = to_table(r.trace);
  REQUIRE(table.n == 4);
  REQUIRE(table.rows() == r.trace.size());

  const std::string path = "test_trace_roundtrip.csv";
  write_trace(path, table);
  const TraceTable back = read_trace(path);
  std::remove(path.c_str());

  REQUIRE(back.n == table.n);
  REQUIRE(back.rows() == table.rows());
  for (std::size_t k = 0; k < table.rows(); ++k) {
    CHECK(back.t[k] == table.t[k]);
    CHECK(back.I[k] == table.I[k]);
    CHECK(back.V[k] == table.V[k]);
    CHECK(back.u[k] == table.u[k]);
    CHECK(back.eps_l[k] == table.eps_l[k]);
    CHECK(back.eps_h[k] == table.eps_h[k]);
    CHECK(back.mode[k] == table.mode[k]);
  }
}

TEST_CASE("trace CSV header uses the stable column order") {
  std::vector<TraceRecord> trace(1);
  trace[0].t = 0.0;
  trace[0].I = Eigen::VectorXd::Zero(2);
  trace[0].V = Eigen::VectorXd::Zero(2);
  trace[0].u = Eigen::VectorXd::Zero(2);
  trace[0].eps_l = Eigen::VectorXd::Zero(2);
  trace[0].eps_h = Eigen::VectorXd::Zero(2);
  trace[0].strict_mode = {0, 1};

  const std::string path = "test_trace_header.csv";
  write_trace(path, to_table(trace));
  std::ifstream in(path);
  std::string header;
  std::getline(in, header);
  in.close();
  std::remove(path.c_str());
  CHECK(header ==
        "t,I_1,I_2,V_1,V_2,u_1,u_2,eps_l_1,eps_l_2,eps_h_1,eps_h_2,"
        "mode_1,mode_2");
}

TEST_CASE("report serialization includes per-node summaries") {
  SafetyReport rep;
  rep.nodes.resize(1);
  rep.nodes[0].min_V = 228.0;
  rep.nodes[0].max_V = 230.5;
  rep.nodes[0].voltage_violations.push_back({0.125, 0.175});
  rep.nodes[0].entered = true;
  rep.nodes[0].first_entry = 0.0;

  const json j = json::parse(report_to_json(rep));
  REQUIRE(j.contains("nodes"));
  REQUIRE(j["nodes"].size() == 1);
  CHECK(j["nodes"][0]["min_V"] == 228.0);
  CHECK(j["nodes"][0]["voltage_violations"][0]["begin"] == 0.125);
  CHECK(j["nodes"][0]["voltage_violations"][0]["end"] == 0.175);
  CHECK(j["nodes"][0]["entered_joint_safe_set"] == true);
}
