#pragma once

#include "hems/config.hpp"

namespace hems {

/// Evolving home state at the start of a slot. The two virtual queues tied
/// to temperature and storage are derived views (temp + shift, g_ess +
/// shift), never integrated separately, so they cannot drift.
struct SystemState {
  long t = 0;
  double temp = 0.0;   ///< indoor temperature (degrees)
  double q = 0.0;      ///< EV energy backlog (kWh), >= 0
  double z = 0.0;      ///< delay virtual queue, >= 0
  double g_ess = 0.0;  ///< stored energy (kWh)

  double shifted_temp(double gamma_shift) const { return temp + gamma_shift; }
  double shifted_ess(double alpha_shift) const { return g_ess + alpha_shift; }
};

/// Exogenous inputs observed at the start of a slot.
struct SlotObservation {
  double price_buy = 0.0;   ///< B_t (currency/kWh)
  double price_sell = 0.0;  ///< S_t, <= price_buy
  double t_out = 0.0;       ///< outdoor temperature (degrees)
  double solar_rho = 0.0;   ///< solar radiation (W/m^2)
  double ev_arrival = 0.0;  ///< EV energy submitted this slot (kWh)
  double t_ref_next = 0.0;  ///< next-slot comfort setpoint (degrees)
  int occupied_next = 1;    ///< next-slot occupancy, 0 or 1
};

/// One EV charging request: demand `energy` submitted from slot `start`,
/// to be completed by slot `deadline`. The submission takes
/// kappa = floor(energy / v_max) full-power slots plus one remainder slot;
/// deadline - start - kappa equals the configured delay tolerance.
struct EvRequest {
  long start = 0;
  long deadline = 0;
  double energy = 0.0;

  long kappa(double v_max) const;
};

/// PV generation (kW) from radiation (W/m^2): theta_pv * c_pv * rho / 1000.
double pv_output(double solar_rho, const HomeConfig& cfg);

/// First-order thermal response (heating):
/// eps*temp + (1-eps)*(t_out + heat_gain*e).
double thermal_step(double temp, double t_out, double e, const HomeConfig& cfg);

/// Storage level after one slot of (dis)charge power y (slots are unit time,
/// so power and energy coincide).
double ess_step(double g_ess, double y);

/// Energy submitted by a request at slot t: v_max during the full slots,
/// the remainder at start+kappa, zero otherwise.
double ev_arrival_at(const EvRequest& req, long t, double v_max);

/// Backlog update max(q - x, 0) + a. The clamp is redundant under the
/// service cap x <= q but kept against round-off.
double energy_queue_step(double q, double x, double a);

/// Delay-queue update: grows by xi and drains by x while a backlog remains
/// unserved, resets to zero once service covers the backlog.
double delay_queue_step(double z, double q, double x, double xi);

/// Grid exchange g = e + x + y - r; positive buys, negative sells.
double grid_exchange(double e, double x, double y, double r);

}  // namespace hems
