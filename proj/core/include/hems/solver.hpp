#pragma once

#include <utility>

#include "hems/params.hpp"
#include "hems/physics.hpp"

namespace hems {

/// One per-slot subproblem: minimize
///   k*y - (q+z)*x + eps*(1-eps)*h*(gamma_shift + t_out + heat_gain*e)
///     + v*(energy_cost(g) + discomfort(e))
/// over the boxes e in [0, e_max], x in [0, x_cap], y in [-u_dmax, u_cmax],
/// with g = e + x + y - pv tied by power balance.
struct P2Instance {
  // state
  double temp = 0.0;  ///< indoor temperature
  double q = 0.0;     ///< EV backlog
  double z = 0.0;     ///< delay queue
  double h = 0.0;     ///< shifted temperature (temp + gamma_shift)
  double k = 0.0;     ///< shifted storage level
  // observation
  double price_buy = 0.0;
  double price_sell = 0.0;
  double t_out = 0.0;
  double pv = 0.0;  ///< renewable output (kW)
  double t_ref_next = 0.0;
  double occupied_next = 1.0;  ///< 0 or 1
  // controller
  double v = 0.0;
  double gamma_shift = 0.0;
  // physics
  double epsilon = 0.0;
  double heat_gain = 0.0;
  double gamma = 0.0;
  // boxes
  double e_max = 0.0;
  double x_cap = 0.0;  ///< min(x_max, q)
  double u_cmax = 0.0;
  double u_dmax = 0.0;
};

/// Controls chosen for one slot. g is always e + x + y - pv exactly.
struct Decision {
  double e = 0.0;  ///< HVAC power (kW)
  double x = 0.0;  ///< EV service (kW)
  double y = 0.0;  ///< storage power (kW, signed)
  double g = 0.0;  ///< grid exchange (kW, signed)
  double objective = 0.0;
};

P2Instance make_p2_instance(const SystemState& state, const SlotObservation& obs,
                            const ControllerParams& params, const HomeConfig& cfg);

/// Comfort-gradient coefficients (b_t, c_t) entering the HVAC on/off
/// thresholds; both vanish when gamma = 0 or the home will be vacant.
std::pair<double, double> hvac_thresholds(const P2Instance& inst);

/// Full objective value at a feasible point (buy/sell price branched on the
/// sign of the implied grid exchange).
double p2_objective(const P2Instance& inst, double e, double x, double y);

/// Exact global minimizer via price-branch decomposition: the buy and sell
/// branches are separable with bang-bang linear parts and a clipped scalar
/// quadratic in e; if neither branch's sign is self-consistent the optimum
/// has g = 0 and is found by scalar-multiplier bisection. Ties are broken
/// toward smaller |g|, then smaller e; at equal prices the buy branch is
/// canonical. Throws NumericalFailure on malformed bounds.
Decision solve_p2(const P2Instance& inst);

/// Brute-force lattice evaluation on a grid_n^3 grid over the boxes.
/// Verification only; same tie rule as solve_p2.
Decision oracle_p2(const P2Instance& inst, int grid_n);

/// oracle_p2 followed by `rounds` local grid refinements around the best
/// lattice point (window shrinks to +-1 step each round).
Decision oracle_p2_refined(const P2Instance& inst, int grid_n, int rounds);

class Rng;

/// Random instance within the config's physical boxes, with jittered
/// controller parameters. Verification plumbing for the solver-vs-oracle
/// comparison and the threshold property tests.
P2Instance sample_p2_instance(Rng& rng, const HomeConfig& cfg);

}  // namespace hems
