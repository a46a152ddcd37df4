// End-to-end checks of the mgrid executable: exit codes, output files, and
// flag handling. Invoked as: cli_tests <mgrid-binary> <scenario.json>
//
// Runs each case through std::system in a scratch directory and counts
// failures; prints one line per check.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

int g_failures = 0;
std::string g_mgrid;
fs::path g_work;

void check(const std::string& what, bool ok) {
  std::printf("[%s] %s\n", ok ? "ok" : "FAIL", what.c_str());
  if (!ok) ++g_failures;
}

int run_cmd(const std::string& cmd) {
  const int rc = std::system(cmd.c_str());
  if (rc == -1) return -1;
#ifdef _WIN32
  return rc;
#else
  return WEXITSTATUS(rc);
#endif
}

std::string quoted(const fs::path& p) { return "'" + p.string() + "'"; }

json load_json(const fs::path& p) {
  std::ifstream in(p);
  json j;
  in >> j;
  return j;
}

fs::path write_config(const json& j, const std::string& name) {
  const fs::path p = g_work / name;
  std::ofstream out(p);
  out << j.dump(2);
  return p;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc != 3) {
    std::cerr << "usage: cli_tests <mgrid-binary> <scenario.json>\n";
    return 64;
  }
  g_mgrid = argv[1];
  const fs::path scenario = argv[2];
  g_work = fs::current_path() / "cli_tests_work";
  fs::remove_all(g_work);
  fs::create_directories(g_work);

  // A short variant of the shipped scenario keeps the suite fast.
  json base = load_json(scenario);
  base["simulation"]["duration"] = 0.02;
  base["simulation"]["events"][0]["time"] = 0.01;
  const fs::path short_cfg = write_config(base, "short.json");

  // ---- validate ----------------------------------------------------------
  check("validate accepts the shipped scenario",
        run_cmd(g_mgrid + " validate " + quoted(scenario)) == 0);
  check("validate of a missing file exits 1",
        run_cmd(g_mgrid + " validate " + quoted(g_work / "nope.json")) == 1);
  {
    json bad = base;
    bad["extra"] = 1;
    const fs::path p = write_config(bad, "unknown_key.json");
    check("validate rejects an unknown key with exit 2",
          run_cmd(g_mgrid + " validate " + quoted(p)) == 2);
  }
  {
    json bad = base;
    bad["nodes"][0]["v_h"] = 500.0;  // above V_s
    const fs::path p = write_config(bad, "assumption.json");
    check("validate reports an assumption violation with exit 3",
          run_cmd(g_mgrid + " validate " + quoted(p)) == 3);
  }
  {
    const fs::path p = g_work / "broken.json";
    std::ofstream(p) << "{ not json";
    check("validate rejects malformed JSON with exit 2",
          run_cmd(g_mgrid + " validate " + quoted(p)) == 2);
  }

  // ---- run ---------------------------------------------------------------
  const fs::path out1 = g_work / "out1";
  check("run completes on the short scenario",
        run_cmd(g_mgrid + " run " + quoted(short_cfg) + " --out " +
                quoted(out1)) == 0);
  const std::string trace_name =
      base["output"]["trace"].get<std::string>();
  const std::string report_name =
      base["output"]["report"].get<std::string>();
  check("run writes the trace file", fs::exists(out1 / trace_name));
  check("run writes the report file", fs::exists(out1 / report_name));
  {
    std::ifstream in(out1 / trace_name);
    std::string header;
    std::getline(in, header);
    check("trace header starts with the stable column order",
          header.rfind("t,I_1,I_2,I_3,I_4,V_1", 0) == 0);
  }
  {
    const json rep = load_json(out1 / report_name);
    check("report lists all four nodes",
          rep.contains("nodes") && rep["nodes"].size() == 4);
  }

  // Schema failures must not leave partial outputs behind.
  {
    json bad = base;
    bad["controller"]["mode"] = "turbo";
    const fs::path p = write_config(bad, "badmode.json");
    const fs::path out2 = g_work / "out2";
    check("run on a bad config exits 2",
          run_cmd(g_mgrid + " run " + quoted(p) + " --out " + quoted(out2)) ==
              2);
    check("run on a bad config writes nothing",
          !fs::exists(out2 / trace_name) && !fs::exists(out2 / report_name));
  }

  // --dt / --duration overrides shrink the trace proportionally.
  {
    const fs::path out3 = g_work / "out3";
    check("run honors --dt and --duration",
          run_cmd(g_mgrid + " run " + quoted(short_cfg) +
                  " --duration 0.001 --dt 2e-5 --out " + quoted(out3)) == 0);
    std::ifstream in(out3 / trace_name);
    std::size_t lines = 0;
    std::string line;
    while (std::getline(in, line)) ++lines;
    check("overridden run has 1 header + 51 records", lines == 52);
  }

  // --seed jitters the initial state but stays reproducible.
  {
    const fs::path outA = g_work / "seedA";
    const fs::path outB = g_work / "seedB";
    const fs::path outC = g_work / "seedC";
    run_cmd(g_mgrid + " run " + quoted(short_cfg) +
            " --duration 0.001 --seed 7 --out " + quoted(outA));
    run_cmd(g_mgrid + " run " + quoted(short_cfg) +
            " --duration 0.001 --seed 7 --out " + quoted(outB));
    run_cmd(g_mgrid + " run " + quoted(short_cfg) +
            " --duration 0.001 --seed 8 --out " + quoted(outC));
    std::ifstream a(outA / trace_name), b(outB / trace_name),
        c(outC / trace_name);
    std::stringstream sa, sb, sc;
    sa << a.rdbuf();
    sb << b.rdbuf();
    sc << c.rdbuf();
    check("same seed reproduces the trace", sa.str() == sb.str());
    check("different seed changes the trace", sa.str() != sc.str());
  }

  // MGRID_OUT_DIR fallback (flag wins when both are present).
  {
    const fs::path out_env = g_work / "out_env";
    const std::string cmd = "MGRID_OUT_DIR=" + quoted(out_env) + " " + g_mgrid +
                            " run " + quoted(short_cfg) + " --duration 0.001";
    check("run honors MGRID_OUT_DIR",
          run_cmd(cmd) == 0 && fs::exists(out_env / trace_name));
  }

  // ---- equilibrium -------------------------------------------------------
  check("equilibrium prints for a valid target",
        run_cmd(g_mgrid + " equilibrium " + quoted(scenario) +
                " --target 230") == 0);
  check("equilibrium rejects a target above V_s",
        run_cmd(g_mgrid + " equilibrium " + quoted(scenario) +
                " --target 400") == 1);

  // ---- plot --------------------------------------------------------------
  {
    const fs::path out4 = g_work / "plots";
    check("plot renders from a recorded trace",
          run_cmd(g_mgrid + " plot " + quoted(short_cfg) + " " +
                  quoted(out1 / trace_name) + " --out " + quoted(out4)) == 0);
    check("plot writes the three charts",
          fs::exists(out4 / "voltage.svg") && fs::exists(out4 / "current.svg") &&
              fs::exists(out4 / "duty.svg"));
  }

  // ---- usage -------------------------------------------------------------
  check("missing subcommand is a usage error",
        run_cmd(g_mgrid + " >/dev/null 2>&1") != 0);

  if (g_failures == 0) fs::remove_all(g_work);
  std::printf("%d failures\n", g_failures);
  return g_failures;
}
