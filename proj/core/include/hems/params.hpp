#pragma once

#include <optional>
#include <utility>

#include "hems/config.hpp"

namespace hems {

/// Controller knobs fixed before a run: the cost/stability tradeoff weight V,
/// the two queue shifts, and the delay-queue arrival rate.
struct ControllerParams {
  double v = 0.0;            ///< tradeoff weight, 0 < V <= min(v1_max, v2_max)
  double gamma_shift = 0.0;  ///< temperature-queue shift (H = T + gamma_shift)
  double alpha_shift = 0.0;  ///< storage-queue shift (K = G + alpha_shift)
  double xi = 0.0;           ///< delay-queue arrival rate (> 0)
};

/// Drift and optimality-gap constants, reported for diagnostics.
struct PerformanceGap {
  double omega_0 = 0.0, omega_1 = 0.0, omega_2 = 0.0, omega_3 = 0.0;
  double upsilon = 0.0;
  double theta = 0.0;      ///< omega_0..3 summed plus upsilon
  double gap_per_v = 0.0;  ///< theta / V
};

/// Everything derived in closed form from a validated config.
struct DerivedBounds {
  double v1_max = 0.0;     ///< tradeoff cap from the temperature guarantee
  double v2_max = 0.0;     ///< tradeoff cap from the storage guarantee
  double gamma_min = 0.0;  ///< admissible temperature-shift range
  double gamma_max = 0.0;
  double alpha_min = 0.0;  ///< admissible storage-shift range
  double alpha_max = 0.0;

  // intermediate constants of the temperature guarantee
  double psi = 0.0, d = 0.0, f = 0.0, h = 0.0, m = 0.0;
  double b_min_coeff = 0.0;  ///< worst-case comfort-gradient lower coefficient
  double c_max_coeff = 0.0;  ///< worst-case comfort-gradient upper coefficient

  double q_max = 0.0;  ///< EV backlog bound V*b_max + a_max
  double z_max = 0.0;  ///< delay-queue bound V*b_max + xi
  int d_max = 0;       ///< worst-case queueing delay (slots), <= r_tolerance

  double theta = 0.0, upsilon = 0.0;
  double omega_0 = 0.0, omega_1 = 0.0, omega_2 = 0.0, omega_3 = 0.0;
};

struct ParamOverrides {
  std::optional<double> v;  ///< must satisfy 0 < v <= min(v1_max, v2_max)
};

/// Closed-form derivation of the controller parameters and their bounds.
/// V defaults to min(v1_max, v2_max); the shifts are set to the upper ends
/// of their ranges; xi = (2*V*b_max + v_max)/(R-1), which pins the delay
/// bound at exactly R. Throws InfeasibleParameters when no feasible set
/// exists or an override is out of range. Requires r_tolerance >= 2.
std::pair<ControllerParams, DerivedBounds> derive_controller_params(
    const ValidatedConfig& cfg, const ParamOverrides& overrides = {});

/// Drift constants and the theta/V optimality gap for fixed params.
/// Pure formula evaluation; diagnostics only.
PerformanceGap compute_performance_gap(const HomeConfig& cfg,
                                       const ControllerParams& params);

}  // namespace hems
