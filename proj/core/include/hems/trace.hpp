#pragma once

#include <cstdint>
#include <filesystem>
#include <utility>
#include <vector>

#include "hems/config.hpp"
#include "hems/physics.hpp"

namespace hems {

/// Aligned exogenous time series. Loading validates every value against the
/// config bounds; out-of-range inputs are errors, never clamped.
struct TraceBundle {
  std::vector<double> outdoor_temp;
  std::vector<double> buy_price;
  std::vector<double> sell_price;  ///< given or derived as sell_ratio * buy
  std::vector<double> solar_rho;
  std::vector<int> occupied;  ///< 0/1 per slot
  std::vector<double> t_ref;

  std::size_t n_slots() const { return outdoor_temp.size(); }
};

/// Hourly step counts used to infer occupancy.
struct StepTrace {
  std::vector<long> steps;
};

/// CSV format: header `t,T_out,B,rho,pi,T_ref` (or with an `S` column after
/// `B`), LF line endings, slot index must equal the row position. When `S`
/// is absent, sell prices are derived as sell_ratio * B.
TraceBundle load_trace_csv(const std::filesystem::path& path, const HomeConfig& cfg);

/// Writes the bundle with an explicit S column; values round-trip exactly.
void write_trace_csv(const TraceBundle& bundle, const std::filesystem::path& path);

/// Occupied unless the hourly step count strictly exceeds the threshold.
std::vector<int> occupancy_from_steps(const StepTrace& steps, long threshold);

/// Daily charging window in whole hours; may wrap past midnight
/// (e.g. start 19, end 6).
struct EvWindow {
  int start_hour = 19;
  int end_hour = 6;
};

struct EvEnergyDist {
  int lo = 4;  ///< kWh, inclusive
  int hi = 18;
};

/// One request per day with uniformly drawn integer energy; the per-request
/// deadline is start + kappa + R. The window must be long enough that the
/// largest request keeps delay tolerance exactly R = cfg.r_tolerance.
/// Requests that could not complete inside the horizon are not emitted.
/// Returns the requests plus the per-slot arrival stream of length n_slots.
std::pair<std::vector<EvRequest>, std::vector<double>> generate_ev_requests(
    std::uint64_t seed, int n_days, const EvWindow& window, const EvEnergyDist& dist,
    const HomeConfig& cfg, std::size_t n_slots);

/// Arrival stream from explicit requests; validates a_t <= a_max.
std::vector<double> arrivals_from_requests(const std::vector<EvRequest>& requests,
                                           std::size_t n_slots, const HomeConfig& cfg);

/// EV request CSV: header `s,c,E`. Deadlines must be consistent with the
/// configured delay tolerance.
std::vector<EvRequest> load_ev_csv(const std::filesystem::path& path,
                                   const HomeConfig& cfg);
void write_ev_csv(const std::vector<EvRequest>& requests,
                  const std::filesystem::path& path);

struct SyntheticTrace {
  TraceBundle bundle;
  StepTrace steps;
};

/// Deterministic synthetic inputs shaped like the real-world winter traces:
/// sinusoidal diurnal outdoor temperature, two-tier buy prices, clipped-sine
/// solar radiation, and a day/night step pattern with weekday absences
/// (roughly a quarter of all hours vacant). Everything stays inside the
/// configured bounds.
SyntheticTrace generate_synthetic_trace(int days, std::uint64_t seed,
                                        const HomeConfig& cfg);

}  // namespace hems
