#include "hems/policy.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "hems/metrics.hpp"

namespace hems {

const char* policy_name(PolicyKind kind) {
  switch (kind) {
    case PolicyKind::proposed: return "proposed";
    case PolicyKind::b1: return "b1";
    case PolicyKind::b2: return "b2";
    case PolicyKind::b3: return "b3";
  }
  return "?";
}

PolicyKind policy_from_name(const std::string& name) {
  if (name == "proposed") return PolicyKind::proposed;
  if (name == "b1") return PolicyKind::b1;
  if (name == "b2") return PolicyKind::b2;
  if (name == "b3") return PolicyKind::b3;
  throw RangeError("policy", "unknown policy: " + name);
}

Policy make_policy(PolicyKind kind, const ValidatedConfig& vcfg,
                   const ParamOverrides& overrides) {
  Policy p;
  p.kind = kind;
  if (kind == PolicyKind::b3) {
    // the proposed controller with the storage taken out of play
    HomeConfig zeroed = vcfg.cfg();
    zeroed.u_cmax = 0.0;
    zeroed.u_dmax = 0.0;
    const ValidatedConfig vz = validate_config(zeroed);
    auto [params, bounds] = derive_controller_params(vz, overrides);
    p.cfg = zeroed;
    p.params = params;
    p.bounds = bounds;
  } else {
    auto [params, bounds] = derive_controller_params(vcfg, overrides);
    p.cfg = vcfg.cfg();
    p.params = params;
    p.bounds = bounds;
  }
  return p;
}

namespace {

double lyapunov_value(const SystemState& s, const ControllerParams& p) {
  const double h = s.shifted_temp(p.gamma_shift);
  const double k = s.shifted_ess(p.alpha_shift);
  return 0.5 * (h * h + s.q * s.q + s.z * s.z + k * k);
}

SlotRecord finish_step(const SystemState& state, const SlotObservation& obs,
                       const Decision& d, const ControllerParams& params,
                       const HomeConfig& cfg, bool shortcut) {
  SlotRecord rec;
  rec.t = state.t;
  rec.decision = d;
  rec.lyapunov = lyapunov_value(state, params);
  rec.t_ref_next = obs.t_ref_next;
  rec.occupied_next = obs.occupied_next;
  rec.shortcut_fired = shortcut;

  SystemState next;
  next.t = state.t + 1;
  next.temp = thermal_step(state.temp, obs.t_out, d.e, cfg);
  next.q = energy_queue_step(state.q, d.x, obs.ev_arrival);
  next.z = delay_queue_step(state.z, state.q, d.x, params.xi);
  next.g_ess = ess_step(state.g_ess, d.y);

  rec.state_after = next;
  rec.h_after = next.shifted_temp(params.gamma_shift);
  rec.k_after = next.shifted_ess(params.alpha_shift);
  rec.phi1 = energy_cost(d.g, obs.price_buy, obs.price_sell);
  rec.phi2 = discomfort_cost(next.temp, obs.t_ref_next, obs.occupied_next, cfg.gamma);
  return rec;
}

// power that steers the next-slot temperature exactly to `target`, clipped
// to the HVAC box
double power_for_target(double temp, double t_out, double target,
                        const HomeConfig& cfg) {
  const double drive = (target - cfg.epsilon * temp) / (1.0 - cfg.epsilon);
  return std::clamp((drive - t_out) / cfg.heat_gain(), 0.0, cfg.e_max);
}

}  // namespace

SlotRecord step_proposed(const SystemState& state, const SlotObservation& obs,
                         const ControllerParams& params, const HomeConfig& cfg) {
  const P2Instance inst = make_p2_instance(state, obs, params, cfg);
  Decision d = solve_p2(inst);

  bool shortcut = false;
  if (obs.occupied_next == 0 &&
      thermal_step(state.temp, obs.t_out, 0.0, cfg) >= cfg.t_min) {
    // home about to be vacant and coasting stays above the floor: idle the
    // HVAC, keep the EV/storage part of the solution
    shortcut = true;
    d.e = 0.0;
    d.g = grid_exchange(0.0, d.x, d.y, inst.pv);
    d.objective = p2_objective(inst, d.e, d.x, d.y);
  }
  return finish_step(state, obs, d, params, cfg, shortcut);
}

SlotRecord step_b1(const SystemState& state, const SlotObservation& obs,
                   const HomeConfig& cfg) {
  double e;
  if (obs.occupied_next == 0 &&
      thermal_step(state.temp, obs.t_out, 0.0, cfg) >= cfg.t_min) {
    e = 0.0;
  } else {
    e = power_for_target(state.temp, obs.t_out, obs.t_ref_next, cfg);
  }
  Decision d;
  d.e = e;
  d.x = std::min(state.q, cfg.x_max);
  d.y = 0.0;
  d.g = grid_exchange(d.e, d.x, d.y, pv_output(obs.solar_rho, cfg));
  return finish_step(state, obs, d, ControllerParams{}, cfg, false);
}

SlotRecord step_b2(const SystemState& state, const SlotObservation& obs,
                   double next_buy_price, const HomeConfig& cfg) {
  const bool coast_ok =
      thermal_step(state.temp, obs.t_out, 0.0, cfg) >= cfg.t_min;
  double e;
  if (obs.occupied_next == 0 && coast_ok) {
    e = 0.0;
  } else if (obs.price_buy < cfg.epsilon * next_buy_price) {
    // cheap now relative to the next slot: pre-heat as far as the band and
    // the rating allow
    const double reach = thermal_step(state.temp, obs.t_out, cfg.e_max, cfg);
    e = power_for_target(state.temp, obs.t_out, std::min(cfg.t_max, reach), cfg);
  } else if (coast_ok) {
    e = 0.0;
  } else {
    e = power_for_target(state.temp, obs.t_out, cfg.t_min, cfg);
  }
  Decision d;
  d.e = e;
  d.x = std::min(state.q, cfg.x_max);
  d.y = 0.0;
  d.g = grid_exchange(d.e, d.x, d.y, pv_output(obs.solar_rho, cfg));
  return finish_step(state, obs, d, ControllerParams{}, cfg, false);
}

SimulationRun run_simulation(const TraceBundle& bundle,
                             const std::vector<EvRequest>& requests,
                             const ValidatedConfig& vcfg, const Policy& policy,
                             double t0, double g0) {
  // dynamics follow the policy's effective config (b3 zeroes the storage
  // limits); the user's validated config governs the initial-state windows
  const HomeConfig& cfg = policy.cfg;
  const HomeConfig& user = vcfg.cfg();
  const std::size_t n = bundle.n_slots();
  if (n < 2) throw TraceLengthMismatch("trace needs at least 2 slots");
  if (bundle.buy_price.size() != n || bundle.sell_price.size() != n ||
      bundle.solar_rho.size() != n || bundle.occupied.size() != n ||
      bundle.t_ref.size() != n)
    throw TraceLengthMismatch("trace arrays have inconsistent lengths");

  if (t0 < user.t_min || t0 > user.t_max) {
    std::ostringstream os;
    os << "initial temperature " << t0 << " outside [" << user.t_min << ", "
       << user.t_max << "]";
    throw InfeasibleInitialState(os.str());
  }
  if (g0 < user.g_min_ess || g0 > user.g_max_ess) {
    std::ostringstream os;
    os << "initial storage level " << g0 << " outside [" << user.g_min_ess
       << ", " << user.g_max_ess << "]";
    throw InfeasibleInitialState(os.str());
  }

  const std::vector<double> arrivals = arrivals_from_requests(requests, n, cfg);

  SimulationRun run;
  run.policy = policy.kind;
  SystemState state;
  state.t = 0;
  state.temp = t0;
  state.g_ess = g0;
  run.initial = state;
  run.records.reserve(n - 1);

  // FIFO positions for observed queueing delays
  struct OpenArrival {
    long slot;
    double position;  // cumulative arrivals including this one
  };
  std::vector<OpenArrival> open;
  std::size_t head = 0;
  double cum_arrived = 0.0;
  double cum_served = 0.0;

  for (std::size_t t = 0; t + 1 < n; ++t) {
    SlotObservation obs;
    obs.price_buy = bundle.buy_price[t];
    obs.price_sell = bundle.sell_price[t];
    obs.t_out = bundle.outdoor_temp[t];
    obs.solar_rho = bundle.solar_rho[t];
    obs.ev_arrival = arrivals[t];
    obs.t_ref_next = bundle.t_ref[t + 1];
    obs.occupied_next = bundle.occupied[t + 1];

    SlotRecord rec;
    switch (policy.kind) {
      case PolicyKind::proposed:
      case PolicyKind::b3:
        rec = step_proposed(state, obs, policy.params, cfg);
        break;
      case PolicyKind::b1:
        rec = step_b1(state, obs, cfg);
        break;
      case PolicyKind::b2:
        rec = step_b2(state, obs, bundle.buy_price[t + 1], cfg);
        break;
    }
    if (rec.shortcut_fired) ++run.shortcut_count;

    // service drains the backlog of earlier slots, then this slot's
    // arrival joins the queue
    cum_served += rec.decision.x;
    long slot_delay = 0;
    while (head < open.size() && open[head].position <= cum_served + 1e-9) {
      const long delay = static_cast<long>(t) - open[head].slot;
      slot_delay = std::max(slot_delay, delay);
      run.delays.push_back({open[head].slot, static_cast<long>(t)});
      ++head;
    }
    rec.ev_delay_running = slot_delay;
    cum_arrived += arrivals[t];
    if (arrivals[t] > 0.0) open.push_back({static_cast<long>(t), cum_arrived});

    run.records.push_back(rec);
    state = rec.state_after;
  }
  run.unserved_backlog = state.q;
  return run;
}

}  // namespace hems
