#include "hems/physics.hpp"

#include <algorithm>
#include <cmath>

namespace hems {

long EvRequest::kappa(double v_max) const {
  return static_cast<long>(std::floor(energy / v_max));
}

double pv_output(double solar_rho, const HomeConfig& cfg) {
  // radiation is W/m^2, powers are kW
  return cfg.theta_pv * cfg.c_pv * solar_rho / 1000.0;
}

double thermal_step(double temp, double t_out, double e, const HomeConfig& cfg) {
  return cfg.epsilon * temp +
         (1.0 - cfg.epsilon) * (t_out + cfg.heat_gain() * e);
}

double ess_step(double g_ess, double y) { return g_ess + y; }

double ev_arrival_at(const EvRequest& req, long t, double v_max) {
  if (req.energy <= 0.0) return 0.0;
  const long k = req.kappa(v_max);
  if (t >= req.start && t < req.start + k) return v_max;
  if (t == req.start + k) return req.energy - static_cast<double>(k) * v_max;
  return 0.0;
}

double energy_queue_step(double q, double x, double a) {
  return std::max(q - x, 0.0) + a;
}

double delay_queue_step(double z, double q, double x, double xi) {
  if (q > x) return std::max(z - x + xi, 0.0);
  return 0.0;
}

double grid_exchange(double e, double x, double y, double r) {
  return e + x + y - r;
}

}  // namespace hems
