#include "hems/cli.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "hems/config.hpp"
#include "hems/metrics.hpp"
#include "hems/params.hpp"
#include "hems/policy.hpp"
#include "hems/rng.hpp"
#include "hems/solver.hpp"
#include "hems/trace.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace hems {

namespace {

struct ConfigOverrides {
  std::optional<double> v, gamma, epsilon, t_min;
};

HomeConfig load_or_default(const std::string& path, const ConfigOverrides& o) {
  HomeConfig cfg = path.empty() ? default_home_config() : load_config_json(path);
  if (o.gamma) cfg.gamma = *o.gamma;
  if (o.epsilon) cfg.epsilon = *o.epsilon;
  if (o.t_min) cfg.t_min = *o.t_min;
  return cfg;
}

json bounds_json(const DerivedBounds& b) {
  return json{{"v1_max", b.v1_max},
              {"v2_max", b.v2_max},
              {"gamma_min", b.gamma_min},
              {"gamma_max", b.gamma_max},
              {"alpha_min", b.alpha_min},
              {"alpha_max", b.alpha_max},
              {"psi", b.psi},
              {"d", b.d},
              {"f", b.f},
              {"h", b.h},
              {"m", b.m},
              {"b_min_coeff", b.b_min_coeff},
              {"c_max_coeff", b.c_max_coeff},
              {"q_max", b.q_max},
              {"z_max", b.z_max},
              {"d_max", b.d_max},
              {"theta", b.theta},
              {"upsilon", b.upsilon},
              {"omega_0", b.omega_0},
              {"omega_1", b.omega_1},
              {"omega_2", b.omega_2},
              {"omega_3", b.omega_3}};
}

json params_json(const ControllerParams& p) {
  return json{
      {"V", p.v}, {"Gamma", p.gamma_shift}, {"alpha", p.alpha_shift}, {"xi", p.xi}};
}

unsigned worker_count(std::size_t points) {
  unsigned n = std::thread::hardware_concurrency();
  if (n == 0) n = 1;
  if (const char* env = std::getenv("HEMS_THREADS")) {
    const long lim = std::strtol(env, nullptr, 10);
    if (lim >= 1) n = static_cast<unsigned>(lim);
  }
  return static_cast<unsigned>(std::min<std::size_t>(n, std::max<std::size_t>(points, 1)));
}

double default_t0(const HomeConfig& cfg) { return 0.5 * (cfg.t_min + cfg.t_max); }

// ---------------------------------------------------------------------------
// subcommands
// ---------------------------------------------------------------------------

struct SimulateArgs {
  std::string config, trace, ev, out_dir, policy;
  ConfigOverrides overrides;
  std::optional<double> t0, g0;
};

int cmd_simulate(const SimulateArgs& a) {
  const HomeConfig cfg = load_or_default(a.config, a.overrides);
  const ValidatedConfig vcfg = validate_config(cfg);
  const Policy policy =
      make_policy(policy_from_name(a.policy), vcfg, ParamOverrides{a.overrides.v});
  const TraceBundle bundle = load_trace_csv(a.trace, cfg);
  const std::vector<EvRequest> requests =
      a.ev.empty() ? std::vector<EvRequest>{} : load_ev_csv(a.ev, cfg);

  const double t0 = a.t0.value_or(default_t0(cfg));
  const double g0 = a.g0.value_or(cfg.g_min_ess);
  const SimulationRun run = run_simulation(bundle, requests, vcfg, policy, t0, g0);
  const RunSummary summary = summarize(run);

  fs::create_directories(a.out_dir);
  {
    std::ofstream slots(fs::path(a.out_dir) / "slots.csv", std::ios::binary);
    if (!slots) throw Error("cannot write slots.csv", false);
    write_slots_csv(run, slots);
  }
  const std::string summary_text = summary_json(summary, policy, cfg);
  {
    std::ofstream out(fs::path(a.out_dir) / "summary.json", std::ios::binary);
    if (!out) throw Error("cannot write summary.json", false);
    out << summary_text;
  }
  std::cout << summary_text;
  return 0;
}

struct SweepArgs {
  std::string config, trace, ev, out_dir, param;
  std::vector<double> values;
  ConfigOverrides overrides;
  std::optional<double> t0, g0;
};

int cmd_sweep(const SweepArgs& a) {
  if (a.values.empty()) throw RangeError("values", "sweep needs at least one value");
  if (a.param != "gamma" && a.param != "epsilon" && a.param != "t_min" &&
      a.param != "v")
    throw RangeError("param", "sweep parameter must be gamma, epsilon, t_min or v");

  const HomeConfig base = load_or_default(a.config, a.overrides);
  const TraceBundle bundle = load_trace_csv(a.trace, base);
  const std::vector<EvRequest> requests =
      a.ev.empty() ? std::vector<EvRequest>{} : load_ev_csv(a.ev, base);

  static constexpr PolicyKind kPolicies[] = {PolicyKind::proposed, PolicyKind::b1,
                                             PolicyKind::b2, PolicyKind::b3};
  struct Point {
    double value;
    PolicyKind kind;
  };
  std::vector<Point> points;
  for (const double value : a.values)
    for (const PolicyKind kind : kPolicies) points.push_back({value, kind});

  std::vector<SweepRow> rows(points.size());
  std::vector<std::exception_ptr> errors(points.size());
  std::atomic<std::size_t> next{0};

  // every point re-derives the controller parameters: the swept parameter
  // moves the feasibility bounds, including the default V
  auto work = [&]() {
    while (true) {
      const std::size_t i = next.fetch_add(1);
      if (i >= points.size()) return;
      try {
        const Point& pt = points[i];
        HomeConfig cfg = base;
        ParamOverrides po{a.overrides.v};
        if (a.param == "gamma") cfg.gamma = pt.value;
        else if (a.param == "epsilon") cfg.epsilon = pt.value;
        else if (a.param == "t_min") cfg.t_min = pt.value;
        else po.v = pt.value;

        const ValidatedConfig vcfg = validate_config(cfg);
        const Policy policy = make_policy(pt.kind, vcfg, po);
        const double t0 = a.t0.value_or(default_t0(cfg));
        const double g0 = a.g0.value_or(cfg.g_min_ess);
        const SimulationRun run =
            run_simulation(bundle, requests, vcfg, policy, t0, g0);

        SweepRow row;
        row.policy = policy_name(pt.kind);
        row.param = a.param;
        row.value = pt.value;
        row.params = policy.params;
        row.bounds = policy.bounds;
        row.gamma = cfg.gamma;
        row.epsilon = cfg.epsilon;
        row.t_min = cfg.t_min;
        row.summary = summarize(run);
        rows[i] = row;
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };

  const unsigned n_workers = worker_count(points.size());
  std::vector<std::thread> workers;
  workers.reserve(n_workers);
  for (unsigned w = 0; w < n_workers; ++w) workers.emplace_back(work);
  for (auto& t : workers) t.join();
  for (const auto& err : errors)
    if (err) std::rethrow_exception(err);

  fs::create_directories(a.out_dir);
  const fs::path out_path = fs::path(a.out_dir) / "sweep.csv";
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw Error("cannot write sweep.csv", false);
  write_sweep_csv(rows, out);

  std::cout << json{{"points", rows.size()}, {"file", out_path.string()}}.dump()
            << "\n";
  return 0;
}

struct CheckArgs {
  std::string config;
  ConfigOverrides overrides;
};

int cmd_check(const CheckArgs& a) {
  const HomeConfig cfg = load_or_default(a.config, a.overrides);
  const ValidatedConfig vcfg = validate_config(cfg);
  const auto [params, bounds] =
      derive_controller_params(vcfg, ParamOverrides{a.overrides.v});
  json j;
  j["params"] = params_json(params);
  j["bounds"] = bounds_json(bounds);
  std::cout << j.dump(2) << "\n";
  return 0;
}

struct OracleArgs {
  std::string config;
  long samples = 1000;
  int grid = 21;
  int rounds = 3;
  std::uint64_t seed = 1;
};

int cmd_oracle(const OracleArgs& a) {
  if (a.grid < 2) throw RangeError("grid", "grid must be >= 2");
  const HomeConfig cfg =
      a.config.empty() ? default_home_config() : load_config_json(a.config);
  validate_config(cfg);

  Rng rng(a.seed);
  double max_gap = -std::numeric_limits<double>::infinity();
  double max_rel_gap = -std::numeric_limits<double>::infinity();
  long threshold_violations = 0;
  const double tol = 1e-12;

  for (long i = 0; i < a.samples; ++i) {
    const P2Instance inst = sample_p2_instance(rng, cfg);
    const Decision got = solve_p2(inst);
    const Decision ref = oracle_p2_refined(inst, a.grid, a.rounds);
    const double gap = got.objective - ref.objective;
    max_gap = std::max(max_gap, gap);
    max_rel_gap = std::max(max_rel_gap, gap / (1.0 + std::fabs(ref.objective)));

    const auto [b_t, c_t] = hvac_thresholds(inst);
    const double pressure =
        -inst.epsilon * (1.0 - inst.epsilon) * inst.h * inst.heat_gain;
    if (inst.v * cfg.s_min + b_t > pressure && std::fabs(got.e) > tol)
      ++threshold_violations;
    if (inst.v * cfg.b_max + c_t < pressure && got.e < inst.e_max - tol)
      ++threshold_violations;
    if (inst.q + inst.z < inst.v * cfg.s_min && std::fabs(got.x) > tol)
      ++threshold_violations;
    if (inst.q + inst.z > inst.v * cfg.b_max && got.x < inst.x_cap - tol)
      ++threshold_violations;
    if (inst.k > -inst.v * cfg.s_min && got.y > tol) ++threshold_violations;
    if (inst.k < -inst.v * cfg.b_max && got.y < -tol) ++threshold_violations;
  }

  json j;
  j["samples"] = a.samples;
  j["grid"] = a.grid;
  j["rounds"] = a.rounds;
  j["seed"] = a.seed;
  j["max_gap"] = max_gap;
  j["max_rel_gap"] = max_rel_gap;
  j["threshold_violations"] = threshold_violations;
  std::cout << j.dump(2) << "\n";
  return threshold_violations == 0 ? 0 : 2;
}

struct GenTraceArgs {
  std::string config, out, ev_out;
  int days = 31;
  std::uint64_t seed = 1;
  int window_start = 19;
  int window_end = 6;
  int e_lo = 4;
  int e_hi = 18;
};

int cmd_gen_trace(const GenTraceArgs& a) {
  const HomeConfig cfg =
      a.config.empty() ? default_home_config() : load_config_json(a.config);
  validate_config(cfg);

  const SyntheticTrace synth = generate_synthetic_trace(a.days, a.seed, cfg);
  const auto [requests, arrivals] =
      generate_ev_requests(a.seed + 1, a.days, EvWindow{a.window_start, a.window_end},
                           EvEnergyDist{a.e_lo, a.e_hi}, cfg,
                           synth.bundle.n_slots());
  (void)arrivals;

  const fs::path out_path(a.out);
  if (out_path.has_parent_path()) fs::create_directories(out_path.parent_path());
  write_trace_csv(synth.bundle, out_path);

  fs::path ev_path;
  if (!a.ev_out.empty()) {
    ev_path = a.ev_out;
  } else {
    ev_path = out_path;
    ev_path.replace_filename(out_path.stem().string() + "_ev.csv");
  }
  if (ev_path.has_parent_path()) fs::create_directories(ev_path.parent_path());
  write_ev_csv(requests, ev_path);

  std::cout << json{{"trace", out_path.string()},
                    {"ev", ev_path.string()},
                    {"slots", synth.bundle.n_slots()},
                    {"requests", requests.size()}}
                   .dump()
            << "\n";
  return 0;
}

void add_override_options(CLI::App* sub, ConfigOverrides& o) {
  sub->add_option("--v", o.v, "override the tradeoff weight V (must be within the cap)");
  sub->add_option("--gamma", o.gamma, "override the discomfort weight");
  sub->add_option("--epsilon", o.epsilon, "override the inertia factor");
  sub->add_option("--t-min", o.t_min, "override the comfort floor");
}

}  // namespace

int run_command(const std::vector<std::string>& args) {
  CLI::App app{"trace-driven home energy management simulator"};
  app.require_subcommand(1);

  SimulateArgs sim;
  auto* simulate = app.add_subcommand("simulate", "run one policy over a trace");
  simulate->add_option("--config", sim.config, "config JSON (built-in default if omitted)");
  simulate->add_option("--trace", sim.trace, "trace CSV")->required();
  simulate->add_option("--ev", sim.ev, "EV request CSV (none if omitted)");
  simulate->add_option("--policy", sim.policy, "proposed|b1|b2|b3")->required();
  simulate->add_option("--out-dir", sim.out_dir, "output directory")->required();
  simulate->add_option("--t0", sim.t0, "initial indoor temperature");
  simulate->add_option("--g0", sim.g0, "initial storage level");
  add_override_options(simulate, sim.overrides);

  SweepArgs sweep;
  auto* sweep_cmd = app.add_subcommand("sweep", "sweep one parameter across all policies");
  sweep_cmd->add_option("--config", sweep.config, "config JSON");
  sweep_cmd->add_option("--trace", sweep.trace, "trace CSV")->required();
  sweep_cmd->add_option("--ev", sweep.ev, "EV request CSV");
  sweep_cmd->add_option("--param", sweep.param, "gamma|epsilon|t_min|v")->required();
  sweep_cmd->add_option("--values", sweep.values, "comma-separated values")
      ->required()
      ->delimiter(',');
  sweep_cmd->add_option("--out-dir", sweep.out_dir, "output directory")->required();
  sweep_cmd->add_option("--t0", sweep.t0, "initial indoor temperature");
  sweep_cmd->add_option("--g0", sweep.g0, "initial storage level");
  add_override_options(sweep_cmd, sweep.overrides);

  CheckArgs check;
  auto* check_cmd =
      app.add_subcommand("check", "validate a config and print the derived bounds");
  check_cmd->add_option("--config", check.config, "config JSON");
  add_override_options(check_cmd, check.overrides);

  OracleArgs oracle;
  auto* oracle_cmd =
      app.add_subcommand("oracle", "randomized solver-vs-grid verification");
  oracle_cmd->add_option("--samples", oracle.samples, "instances to sample");
  oracle_cmd->add_option("--grid", oracle.grid, "lattice points per axis");
  oracle_cmd->add_option("--rounds", oracle.rounds, "refinement rounds");
  oracle_cmd->add_option("--seed", oracle.seed, "sampling seed");
  oracle_cmd->add_option("--config", oracle.config, "config JSON");

  GenTraceArgs gen;
  auto* gen_cmd = app.add_subcommand("gen-trace", "write a synthetic trace bundle");
  gen_cmd->add_option("--days", gen.days, "number of days");
  gen_cmd->add_option("--seed", gen.seed, "generator seed");
  gen_cmd->add_option("--out", gen.out, "trace CSV path")->required();
  gen_cmd->add_option("--ev-out", gen.ev_out, "EV CSV path (derived if omitted)");
  gen_cmd->add_option("--config", gen.config, "config JSON");
  gen_cmd->add_option("--window-start", gen.window_start, "EV window start hour");
  gen_cmd->add_option("--window-end", gen.window_end, "EV window end hour");
  gen_cmd->add_option("--e-lo", gen.e_lo, "EV energy draw lower bound (kWh)");
  gen_cmd->add_option("--e-hi", gen.e_hi, "EV energy draw upper bound (kWh)");

  std::vector<const char*> argv;
  argv.reserve(args.size() + 1);
  argv.push_back("hems");
  for (const auto& s : args) argv.push_back(s.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
    if (simulate->parsed()) return cmd_simulate(sim);
    if (sweep_cmd->parsed()) return cmd_sweep(sweep);
    if (check_cmd->parsed()) return cmd_check(check);
    if (oracle_cmd->parsed()) return cmd_oracle(oracle);
    if (gen_cmd->parsed()) return cmd_gen_trace(gen);
    return 1;
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.validation() ? 1 : 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace hems
