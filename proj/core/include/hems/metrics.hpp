#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "hems/policy.hpp"

namespace hems {

/// Energy cost of a grid exchange: b*g when buying (g > 0), s*g when
/// selling. Canonical branch form.
double energy_cost(double g, double b, double s);

/// The equivalent half-sum form ((b-s)/2)|g| + ((b+s)/2)g, kept as a
/// cross-check of energy_cost.
double energy_cost_half_sum(double g, double b, double s);

/// gamma * occupied * (t_next - t_ref_next)^2.
double discomfort_cost(double t_next, double t_ref_next, int occupied_next,
                       double gamma);

/// Average absolute deviation of next-slot temperature from the setpoint
/// over occupied slots, with the (n_on - 1) denominator; 0 when n_on <= 1.
double atd(const std::vector<SlotRecord>& records);

struct RunSummary {
  double total_energy_cost = 0.0;
  double total_discomfort_cost = 0.0;
  double total_cost = 0.0;
  double atd = 0.0;
  long n_on = 0;          ///< occupied decision slots
  long max_ev_delay = 0;  ///< slots; 0 if no arrival completed
  double temp_lo = 0.0, temp_hi = 0.0;  ///< observed range incl. initial state
  double ess_lo = 0.0, ess_hi = 0.0;
  double q_peak = 0.0, z_peak = 0.0;
};

/// Exact sums and extremes over the records. Throws EmptyRun.
RunSummary summarize(const SimulationRun& run);

/// Per-slot CSV, fixed column order
/// `t,e,x,y,g,T,Q,Z,G,H,K,phi1,phi2,occupied_next`, floats with 9
/// significant digits. State columns are post-step values.
void write_slots_csv(const SimulationRun& run, std::ostream& out);

/// Run summary as a JSON document (policy, params echo, totals, ranges,
/// queue peaks, theta/V, currency label).
std::string summary_json(const RunSummary& summary, const Policy& policy,
                         const HomeConfig& cfg);

/// One sweep point: a (policy, parameter value) pair plus its summary.
struct SweepRow {
  std::string policy;
  std::string param;
  double value = 0.0;
  ControllerParams params;
  DerivedBounds bounds;
  double gamma = 0.0, epsilon = 0.0, t_min = 0.0;
  RunSummary summary;
};

/// Sweep CSV: one row per (value, policy) point, summary fields flattened.
void write_sweep_csv(const std::vector<SweepRow>& rows, std::ostream& out);

}  // namespace hems
