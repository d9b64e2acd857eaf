#pragma once

#include <filesystem>
#include <string>

#include "hems/errors.hpp"

namespace hems {

/// Physical and economic constants of one home. All temperatures, the
/// conductivity and the discomfort weight are interpreted in one consistent
/// temperature unit (Celsius by default); powers are kW, energies kWh.
struct HomeConfig {
  double slot_hours = 1.0;  ///< slot duration tau (hours); normalized to 1
  double epsilon = 0.0;     ///< thermal inertia factor, 0 < epsilon < 1
  double eta = 1.0;         ///< thermal conversion efficiency (heating)
  double conductivity_a = 1.0;  ///< overall thermal conductivity A (kW/degree)
  double e_max = 0.0;           ///< HVAC power rating (kW)

  double t_min = 0.0, t_max = 0.0;          ///< comfort band (degrees)
  double t_out_min = 0.0, t_out_max = 0.0;  ///< outdoor temperature bounds
  double t_ref_min = 0.0, t_ref_max = 0.0;  ///< setpoint bounds

  double b_min = 0.0, b_max = 0.0;  ///< buy price bounds (currency/kWh)
  double s_min = 0.0, s_max = 0.0;  ///< sell price bounds (currency/kWh)
  double gamma = 0.0;               ///< discomfort weight (currency/degree^2)

  double g_min_ess = 0.0, g_max_ess = 0.0;  ///< storage energy window (kWh)
  double u_cmax = 0.0, u_dmax = 0.0;        ///< storage charge/discharge limits (kW)

  double v_max = 0.0;   ///< EV max charging power (kW)
  double x_max = 0.0;   ///< max EV service rate (kW)
  double a_max = 0.0;   ///< max EV arrival per slot (kW)
  int r_tolerance = 0;  ///< tolerant EV service delay R (slots)

  double theta_pv = 0.0;    ///< PV generation efficiency
  double c_pv = 0.0;        ///< panel radiation area (m^2)
  double sell_ratio = 0.9;  ///< S_t / B_t when sell prices are derived

  std::string currency = "RMB";  ///< label carried into reports

  /// Thermal gain eta/A: degrees of steady-state lift per kW of HVAC power.
  double heat_gain() const { return eta / conductivity_a; }
};

/// Controllability margin psi = (1-eps)(t_out span + heat_gain*e_max).
/// The comfort band must be wider than psi for the controller to exist.
double compute_psi(const HomeConfig& cfg);

/// Proof token: holds a config that passed validate_config.
class ValidatedConfig {
 public:
  const HomeConfig& cfg() const noexcept { return cfg_; }
  double psi() const noexcept { return psi_; }

  friend ValidatedConfig validate_config(const HomeConfig& cfg);

 private:
  ValidatedConfig(HomeConfig cfg, double psi) : cfg_(std::move(cfg)), psi_(psi) {}
  HomeConfig cfg_;
  double psi_;
};

/// Checks field sanity plus the three controllability assumptions:
///   (17) t_out_max <= t_max
///   (18) heat_gain*e_max + t_out_min >= t_min
///   (19) t_max - t_min > psi
/// Throws RangeError or AssumptionViolated.
ValidatedConfig validate_config(const HomeConfig& cfg);

/// Strict JSON loader: exact field names, unknown keys rejected. Either
/// "epsilon" or "omega" (system time constant, hours) must be present;
/// omega is converted via epsilon = exp(-slot_hours/omega).
HomeConfig parse_config_json(const std::string& text);
HomeConfig load_config_json(const std::filesystem::path& path);

std::string config_to_json(const HomeConfig& cfg);

/// Reference parameter set used by the CLI when no config file is given
/// (winter heating, hourly slots, 31-day horizon scale).
HomeConfig default_home_config();

}  // namespace hems
