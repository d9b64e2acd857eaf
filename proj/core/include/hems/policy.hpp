#pragma once

#include <string>
#include <vector>

#include "hems/params.hpp"
#include "hems/solver.hpp"
#include "hems/trace.hpp"

namespace hems {

enum class PolicyKind { proposed, b1, b2, b3 };

const char* policy_name(PolicyKind kind);
PolicyKind policy_from_name(const std::string& name);  // throws RangeError

/// A runnable policy. `cfg` is the effective config: for b3 it is the user
/// config with the storage power limits zeroed (b3 is the proposed
/// controller without storage), re-validated and re-derived, so running
/// proposed on that config is bit-identical to running b3.
struct Policy {
  PolicyKind kind = PolicyKind::proposed;
  HomeConfig cfg;
  ControllerParams params;  ///< zeros for b1/b2
  DerivedBounds bounds;
};

Policy make_policy(PolicyKind kind, const ValidatedConfig& cfg,
                   const ParamOverrides& overrides = {});

/// Everything recorded about one slot. State fields are post-step values
/// (the state at t+1); `lyapunov` is evaluated at the pre-step state.
struct SlotRecord {
  long t = 0;
  Decision decision;
  SystemState state_after;
  double h_after = 0.0;  ///< state_after.temp + gamma_shift
  double k_after = 0.0;  ///< state_after.g_ess + alpha_shift
  double phi1 = 0.0;     ///< energy cost of the slot
  double phi2 = 0.0;     ///< discomfort cost of the slot
  double lyapunov = 0.0;
  long ev_delay_running = 0;  ///< max delay of arrivals completed this slot
  double t_ref_next = 0.0;
  int occupied_next = 1;
  bool shortcut_fired = false;  ///< vacancy shortcut forced e = 0
};

/// Proposed controller step: solve the per-slot subproblem, apply the
/// vacancy shortcut (zero HVAC power when the home will be vacant and
/// coasting stays above t_min, keeping x and y), then advance the state.
SlotRecord step_proposed(const SystemState& state, const SlotObservation& obs,
                         const ControllerParams& params, const HomeConfig& cfg);

/// Setpoint-tracking baseline: heat to the comfort setpoint when occupied,
/// serve the EV backlog immediately, never touch storage.
SlotRecord step_b1(const SystemState& state, const SlotObservation& obs,
                   const HomeConfig& cfg);

/// One-step price-lookahead baseline: pre-heat toward t_max when the
/// current price is below epsilon times the next one, otherwise coast down
/// to t_min. EV and storage handling as b1.
SlotRecord step_b2(const SystemState& state, const SlotObservation& obs,
                   double next_buy_price, const HomeConfig& cfg);

struct EvDelaySample {
  long arrival_slot = 0;
  long served_slot = 0;
  long delay() const { return served_slot - arrival_slot; }
};

struct SimulationRun {
  PolicyKind policy = PolicyKind::proposed;
  SystemState initial;
  std::vector<SlotRecord> records;  ///< one per decision slot t = 0..N-2
  std::vector<EvDelaySample> delays;
  double unserved_backlog = 0.0;  ///< kWh still queued at horizon end
  long shortcut_count = 0;
};

/// Deterministic slot loop over t = 0..N-2. Initial queues start empty;
/// t0 must lie in the comfort band and g0 in the storage window.
SimulationRun run_simulation(const TraceBundle& bundle,
                             const std::vector<EvRequest>& requests,
                             const ValidatedConfig& cfg, const Policy& policy,
                             double t0, double g0);

}  // namespace hems
