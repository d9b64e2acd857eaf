#include <iostream>
#include <sstream>

#include <doctest.h>
#include <json.hpp>

#include "hems/cli.hpp"
#include "hems/config.hpp"
#include "support.hpp"

using namespace hems;
using hems::test::TempDir;
using hems::test::read_file;
using hems::test::write_file;

namespace {

struct CliResult {
  int exit_code;
  std::string out;
};

CliResult run_cli(const std::vector<std::string>& args) {
  std::ostringstream captured;
  std::streambuf* old = std::cout.rdbuf(captured.rdbuf());
  const int code = run_command(args);
  std::cout.rdbuf(old);
  return {code, captured.str()};
}

}  // namespace

TEST_CASE("check prints the derived bounds") {
  TempDir dir("cli_check");
  const auto cfg_path = dir.path() / "cfg.json";
  write_file(cfg_path, config_to_json(default_home_config()));

  const CliResult res = run_cli({"check", "--config", cfg_path.string()});
  REQUIRE(res.exit_code == 0);
  const auto j = nlohmann::json::parse(res.out);
  CHECK(j["params"]["V"].get<double>() == doctest::Approx(3.29318).epsilon(1e-4));
  CHECK(j["bounds"]["d_max"].get<int>() == 5);
  CHECK(j["bounds"]["v2_max"].get<double>() ==
        doctest::Approx(23.6364).epsilon(1e-4));
}

TEST_CASE("check rejects an invalid config with exit code 1") {
  TempDir dir("cli_check_bad");
  HomeConfig bad = default_home_config();
  bad.t_out_max = 30.0;
  const auto cfg_path = dir.path() / "cfg.json";
  write_file(cfg_path, config_to_json(bad));
  CHECK(run_cli({"check", "--config", cfg_path.string()}).exit_code == 1);
}

TEST_CASE("unknown flags and policies exit with 1") {
  CHECK(run_cli({"check", "--nonsense"}).exit_code == 1);
  TempDir dir("cli_pol");
  const auto trace = dir.path() / "t.csv";
  CHECK(run_cli({"simulate", "--trace", trace.string(), "--policy", "b9",
                 "--out-dir", dir.path().string()})
            .exit_code == 1);
}

TEST_CASE("gen-trace and simulate are deterministic") {
  TempDir dir("cli_det");
  const auto t1 = dir.path() / "a" / "trace.csv";
  const auto t2 = dir.path() / "b" / "trace.csv";
  REQUIRE(run_cli({"gen-trace", "--days", "5", "--seed", "9", "--out", t1.string()})
              .exit_code == 0);
  REQUIRE(run_cli({"gen-trace", "--days", "5", "--seed", "9", "--out", t2.string()})
              .exit_code == 0);
  CHECK(read_file(t1) == read_file(t2));
  CHECK(read_file(dir.path() / "a" / "trace_ev.csv") ==
        read_file(dir.path() / "b" / "trace_ev.csv"));

  const auto run1 = dir.path() / "run1";
  const auto run2 = dir.path() / "run2";
  for (const auto& out : {run1, run2}) {
    REQUIRE(run_cli({"simulate", "--trace", t1.string(), "--ev",
                     (dir.path() / "a" / "trace_ev.csv").string(), "--policy",
                     "proposed", "--out-dir", out.string(), "--t0", "22.5"})
                .exit_code == 0);
  }
  CHECK(read_file(run1 / "slots.csv") == read_file(run2 / "slots.csv"));
  CHECK(read_file(run1 / "summary.json") == read_file(run2 / "summary.json"));

  const auto j = nlohmann::json::parse(read_file(run1 / "summary.json"));
  for (const char* key : {"policy", "params", "totals", "atd", "max_ev_delay",
                          "temp_range", "ess_range", "queue_peaks",
                          "theta_over_v", "currency"})
    CHECK(j.contains(key));
  for (const char* key : {"V", "Gamma", "alpha", "xi", "gamma", "eps", "t_min"})
    CHECK(j["params"].contains(key));
  for (const char* key : {"energy", "discomfort", "total"})
    CHECK(j["totals"].contains(key));
  CHECK(j["temp_range"].size() == 2);
  CHECK(j["queue_peaks"].size() == 2);
}

TEST_CASE("runtime failures exit with 2") {
  TempDir dir("cli_rt");
  const auto trace = dir.path() / "trace.csv";
  REQUIRE(run_cli({"gen-trace", "--days", "3", "--seed", "4", "--out",
                   trace.string()})
              .exit_code == 0);
  // an output directory that cannot be created is a runtime error
  const CliResult res =
      run_cli({"simulate", "--trace", trace.string(), "--policy", "proposed",
               "--out-dir", (trace / "nested").string()});
  CHECK(res.exit_code == 2);
}

TEST_CASE("storage-free policy equals the zeroed config end to end") {
  TempDir dir("cli_b3");
  const auto trace = dir.path() / "trace.csv";
  REQUIRE(run_cli({"gen-trace", "--days", "5", "--seed", "3", "--out",
                   trace.string()})
              .exit_code == 0);
  const auto ev = dir.path() / "trace_ev.csv";

  HomeConfig zeroed = default_home_config();
  zeroed.u_cmax = 0.0;
  zeroed.u_dmax = 0.0;
  const auto zero_cfg = dir.path() / "zero.json";
  write_file(zero_cfg, config_to_json(zeroed));

  const auto out_b3 = dir.path() / "b3";
  const auto out_prop = dir.path() / "prop";
  REQUIRE(run_cli({"simulate", "--trace", trace.string(), "--ev", ev.string(),
                   "--policy", "b3", "--out-dir", out_b3.string(), "--t0", "22.5"})
              .exit_code == 0);
  REQUIRE(run_cli({"simulate", "--config", zero_cfg.string(), "--trace",
                   trace.string(), "--ev", ev.string(), "--policy", "proposed",
                   "--out-dir", out_prop.string(), "--t0", "22.5"})
              .exit_code == 0);
  CHECK(read_file(out_b3 / "slots.csv") == read_file(out_prop / "slots.csv"));
}

TEST_CASE("sweep emits one row per policy and value") {
  TempDir dir("cli_sweep");
  const auto trace = dir.path() / "trace.csv";
  REQUIRE(run_cli({"gen-trace", "--days", "4", "--seed", "21", "--out",
                   trace.string()})
              .exit_code == 0);
  const auto ev = dir.path() / "trace_ev.csv";

  const auto out = dir.path() / "sweep";
  const CliResult res =
      run_cli({"sweep", "--trace", trace.string(), "--ev", ev.string(), "--param",
               "gamma", "--values", "0,0.002,0.01,0.02", "--out-dir", out.string(),
               "--t0", "22.5"});
  REQUIRE(res.exit_code == 0);

  const std::string csv = read_file(out / "sweep.csv");
  const long rows = std::count(csv.begin(), csv.end(), '\n');
  CHECK(rows == 1 + 16);  // header + 4 values x 4 policies
  CHECK(csv.find("proposed,gamma,0,") != std::string::npos);
  CHECK(csv.find("b2,gamma,0.02,") != std::string::npos);
}

TEST_CASE("oracle subcommand reports a clean comparison") {
  const CliResult res = run_cli(
      {"oracle", "--samples", "40", "--grid", "13", "--seed", "5", "--rounds", "3"});
  REQUIRE(res.exit_code == 0);
  const auto j = nlohmann::json::parse(res.out);
  CHECK(j["threshold_violations"].get<long>() == 0);
  CHECK(j["max_rel_gap"].get<double>() <= 1e-6);
}

TEST_CASE("tradeoff override above the cap fails the run") {
  TempDir dir("cli_vcap");
  const auto trace = dir.path() / "trace.csv";
  REQUIRE(run_cli({"gen-trace", "--days", "3", "--seed", "2", "--out",
                   trace.string()})
              .exit_code == 0);
  const CliResult res =
      run_cli({"simulate", "--trace", trace.string(), "--policy", "proposed",
               "--out-dir", (dir.path() / "o").string(), "--v", "50.0"});
  CHECK(res.exit_code == 1);
}
