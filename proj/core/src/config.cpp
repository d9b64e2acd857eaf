#include "hems/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace hems {

double compute_psi(const HomeConfig& cfg) {
  return (1.0 - cfg.epsilon) *
         (cfg.t_out_max - cfg.t_out_min + cfg.heat_gain() * cfg.e_max);
}

namespace {

void require(bool ok, const char* field, const std::string& what) {
  if (!ok) throw RangeError(field, what);
}

}  // namespace

ValidatedConfig validate_config(const HomeConfig& cfg) {
  require(cfg.slot_hours > 0.0, "slot_hours", "slot_hours must be positive");
  require(cfg.epsilon > 0.0 && cfg.epsilon < 1.0, "epsilon",
          "epsilon must lie strictly between 0 and 1");
  require(cfg.eta > 0.0, "eta", "eta must be positive");
  require(cfg.conductivity_a > 0.0, "conductivity_a",
          "conductivity_a must be positive");
  require(cfg.e_max >= 0.0, "e_max", "e_max must be nonnegative");
  require(cfg.t_min < cfg.t_max, "t_min", "comfort band requires t_min < t_max");
  require(cfg.t_out_min <= cfg.t_out_max, "t_out_min",
          "outdoor bounds require t_out_min <= t_out_max");
  require(cfg.t_ref_min <= cfg.t_ref_max, "t_ref_min",
          "setpoint bounds require t_ref_min <= t_ref_max");
  require(cfg.b_min >= 0.0 && cfg.b_max >= cfg.b_min, "b_max",
          "buy price bounds require 0 <= b_min <= b_max");
  require(cfg.s_min >= 0.0 && cfg.s_max >= cfg.s_min, "s_max",
          "sell price bounds require 0 <= s_min <= s_max");
  require(cfg.gamma >= 0.0, "gamma", "gamma must be nonnegative");
  require(cfg.g_min_ess < cfg.g_max_ess, "g_min_ess",
          "storage window requires g_min_ess < g_max_ess");
  require(cfg.u_cmax >= 0.0 && cfg.u_dmax >= 0.0, "u_cmax",
          "storage power limits must be nonnegative");
  require(cfg.v_max > 0.0, "v_max", "v_max must be positive");
  require(cfg.x_max >= 0.0, "x_max", "x_max must be nonnegative");
  require(cfg.a_max >= 0.0, "a_max", "a_max must be nonnegative");
  require(cfg.x_max >= cfg.a_max, "x_max",
          "service rate x_max must cover the peak arrival a_max");
  require(cfg.r_tolerance >= 1, "r_tolerance", "r_tolerance must be >= 1");
  require(cfg.theta_pv >= 0.0 && cfg.c_pv >= 0.0, "theta_pv",
          "PV parameters must be nonnegative");
  require(cfg.sell_ratio > 0.0 && cfg.sell_ratio <= 1.0, "sell_ratio",
          "sell_ratio must lie in (0, 1]");

  // Controllability assumptions: the home must be heatable above t_min,
  // never pushed above t_max by the outdoors alone, and the comfort band
  // must leave slack beyond the one-slot swing psi.
  if (!(cfg.t_out_max <= cfg.t_max)) {
    std::ostringstream os;
    os << "assumption (17) violated: t_out_max " << cfg.t_out_max << " > t_max "
       << cfg.t_max;
    throw AssumptionViolated(17, cfg.t_out_max, cfg.t_max, os.str());
  }
  const double lift = cfg.heat_gain() * cfg.e_max + cfg.t_out_min;
  if (!(lift >= cfg.t_min)) {
    std::ostringstream os;
    os << "assumption (18) violated: heat_gain*e_max + t_out_min " << lift
       << " < t_min " << cfg.t_min;
    throw AssumptionViolated(18, lift, cfg.t_min, os.str());
  }
  const double psi = compute_psi(cfg);
  const double band = cfg.t_max - cfg.t_min;
  if (!(band > psi)) {
    std::ostringstream os;
    os << "assumption (19) violated: psi " << psi << " >= comfort band " << band;
    throw AssumptionViolated(19, psi, band, os.str());
  }

  return ValidatedConfig(cfg, psi);
}

// ---------------------------------------------------------------------------
// JSON loading
// ---------------------------------------------------------------------------

namespace {

using nlohmann::json;

const std::set<std::string> kNumericFields = {
    "slot_hours", "epsilon",   "omega",     "eta",       "conductivity_a",
    "e_max",      "t_min",     "t_max",     "t_out_min", "t_out_max",
    "t_ref_min",  "t_ref_max", "b_min",     "b_max",     "s_min",
    "s_max",      "gamma",     "g_min_ess", "g_max_ess", "u_cmax",
    "u_dmax",     "v_max",     "x_max",     "a_max",     "r_tolerance",
    "theta_pv",   "c_pv",      "sell_ratio"};

double num(const json& j, const char* key) {
  const auto& v = j.at(key);
  if (!v.is_number()) throw RangeError(key, std::string(key) + " must be a number");
  return v.get<double>();
}

}  // namespace

HomeConfig parse_config_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(0, 0, std::string("config JSON: ") + e.what());
  }
  if (!j.is_object()) throw ParseError(0, 0, "config JSON must be an object");

  for (const auto& [key, value] : j.items()) {
    if (kNumericFields.count(key) == 0 && key != "currency")
      throw RangeError(key, "unknown config field: " + key);
  }

  HomeConfig cfg;
  if (j.contains("slot_hours")) cfg.slot_hours = num(j, "slot_hours");

  const bool has_eps = j.contains("epsilon");
  const bool has_omega = j.contains("omega");
  if (has_eps == has_omega)
    throw RangeError("epsilon", "exactly one of epsilon or omega is required");
  if (has_eps)
    cfg.epsilon = num(j, "epsilon");
  else
    cfg.epsilon = std::exp(-cfg.slot_hours / num(j, "omega"));

  cfg.eta = num(j, "eta");
  cfg.conductivity_a = num(j, "conductivity_a");
  cfg.e_max = num(j, "e_max");
  cfg.t_min = num(j, "t_min");
  cfg.t_max = num(j, "t_max");
  cfg.t_out_min = num(j, "t_out_min");
  cfg.t_out_max = num(j, "t_out_max");
  cfg.t_ref_min = num(j, "t_ref_min");
  cfg.t_ref_max = num(j, "t_ref_max");
  cfg.b_min = num(j, "b_min");
  cfg.b_max = num(j, "b_max");
  cfg.s_min = num(j, "s_min");
  cfg.s_max = num(j, "s_max");
  cfg.gamma = num(j, "gamma");
  cfg.g_min_ess = num(j, "g_min_ess");
  cfg.g_max_ess = num(j, "g_max_ess");
  cfg.u_cmax = num(j, "u_cmax");
  cfg.u_dmax = num(j, "u_dmax");
  cfg.v_max = num(j, "v_max");
  cfg.x_max = num(j, "x_max");
  cfg.a_max = num(j, "a_max");
  cfg.r_tolerance = static_cast<int>(num(j, "r_tolerance"));
  cfg.theta_pv = num(j, "theta_pv");
  cfg.c_pv = num(j, "c_pv");
  if (j.contains("sell_ratio")) cfg.sell_ratio = num(j, "sell_ratio");
  if (j.contains("currency")) cfg.currency = j.at("currency").get<std::string>();
  return cfg;
}

HomeConfig load_config_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw RangeError("config", "cannot open config file: " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config_json(buffer.str());
}

std::string config_to_json(const HomeConfig& cfg) {
  json j;
  j["slot_hours"] = cfg.slot_hours;
  j["epsilon"] = cfg.epsilon;
  j["eta"] = cfg.eta;
  j["conductivity_a"] = cfg.conductivity_a;
  j["e_max"] = cfg.e_max;
  j["t_min"] = cfg.t_min;
  j["t_max"] = cfg.t_max;
  j["t_out_min"] = cfg.t_out_min;
  j["t_out_max"] = cfg.t_out_max;
  j["t_ref_min"] = cfg.t_ref_min;
  j["t_ref_max"] = cfg.t_ref_max;
  j["b_min"] = cfg.b_min;
  j["b_max"] = cfg.b_max;
  j["s_min"] = cfg.s_min;
  j["s_max"] = cfg.s_max;
  j["gamma"] = cfg.gamma;
  j["g_min_ess"] = cfg.g_min_ess;
  j["g_max_ess"] = cfg.g_max_ess;
  j["u_cmax"] = cfg.u_cmax;
  j["u_dmax"] = cfg.u_dmax;
  j["v_max"] = cfg.v_max;
  j["x_max"] = cfg.x_max;
  j["a_max"] = cfg.a_max;
  j["r_tolerance"] = cfg.r_tolerance;
  j["theta_pv"] = cfg.theta_pv;
  j["c_pv"] = cfg.c_pv;
  j["sell_ratio"] = cfg.sell_ratio;
  j["currency"] = cfg.currency;
  return j.dump(2) + "\n";
}

HomeConfig default_home_config() {
  HomeConfig cfg;
  cfg.slot_hours = 1.0;
  cfg.epsilon = 0.985;
  cfg.eta = 1.0;
  cfg.conductivity_a = 1.0 / 15.0;  // heat_gain = 15 degrees per kW
  cfg.e_max = 8.0;
  cfg.t_min = 15.0;
  cfg.t_max = 25.0;
  cfg.t_out_min = 0.0;
  cfg.t_out_max = 10.0;
  cfg.t_ref_min = 22.5;
  cfg.t_ref_max = 23.5;
  cfg.b_min = 0.5;
  cfg.b_max = 1.0;
  cfg.s_min = 0.45;
  cfg.s_max = 0.9;
  cfg.gamma = 0.0;
  cfg.g_min_ess = 5.0;
  cfg.g_max_ess = 20.0;
  cfg.u_cmax = 1.0;
  cfg.u_dmax = 1.0;
  cfg.v_max = 3.0;
  cfg.x_max = 6.0;  // covers xi for every inertia factor the band admits
  cfg.a_max = 3.0;
  cfg.r_tolerance = 5;
  cfg.theta_pv = 0.2;
  cfg.c_pv = 30.0;
  cfg.sell_ratio = 0.9;
  return cfg;
}

}  // namespace hems
