#include "hems/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

#include <json.hpp>

namespace hems {

double energy_cost(double g, double b, double s) {
  return g > 0.0 ? b * g : s * g;
}

double energy_cost_half_sum(double g, double b, double s) {
  return 0.5 * (b - s) * std::fabs(g) + 0.5 * (b + s) * g;
}

double discomfort_cost(double t_next, double t_ref_next, int occupied_next,
                       double gamma) {
  const double dev = t_next - t_ref_next;
  return gamma * static_cast<double>(occupied_next) * dev * dev;
}

double atd(const std::vector<SlotRecord>& records) {
  long n_on = 0;
  double sum = 0.0;
  for (const auto& rec : records) {
    if (rec.occupied_next == 0) continue;
    ++n_on;
    sum += std::fabs(rec.state_after.temp - rec.t_ref_next);
  }
  if (n_on <= 1) return 0.0;
  return sum / static_cast<double>(n_on - 1);
}

RunSummary summarize(const SimulationRun& run) {
  if (run.records.empty()) throw EmptyRun("cannot summarize an empty run");

  RunSummary s;
  s.temp_lo = s.temp_hi = run.initial.temp;
  s.ess_lo = s.ess_hi = run.initial.g_ess;
  s.q_peak = run.initial.q;
  s.z_peak = run.initial.z;
  for (const auto& rec : run.records) {
    s.total_energy_cost += rec.phi1;
    s.total_discomfort_cost += rec.phi2;
    if (rec.occupied_next) ++s.n_on;
    s.temp_lo = std::min(s.temp_lo, rec.state_after.temp);
    s.temp_hi = std::max(s.temp_hi, rec.state_after.temp);
    s.ess_lo = std::min(s.ess_lo, rec.state_after.g_ess);
    s.ess_hi = std::max(s.ess_hi, rec.state_after.g_ess);
    s.q_peak = std::max(s.q_peak, rec.state_after.q);
    s.z_peak = std::max(s.z_peak, rec.state_after.z);
  }
  s.total_cost = s.total_energy_cost + s.total_discomfort_cost;
  s.atd = atd(run.records);
  for (const auto& d : run.delays) s.max_ev_delay = std::max(s.max_ev_delay, d.delay());
  return s;
}

namespace {

// 9 significant digits, compact
void put(std::ostream& out, double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  out << buf;
}

}  // namespace

void write_slots_csv(const SimulationRun& run, std::ostream& out) {
  out << "t,e,x,y,g,T,Q,Z,G,H,K,phi1,phi2,occupied_next\n";
  for (const auto& rec : run.records) {
    out << rec.t << ',';
    put(out, rec.decision.e);
    out << ',';
    put(out, rec.decision.x);
    out << ',';
    put(out, rec.decision.y);
    out << ',';
    put(out, rec.decision.g);
    out << ',';
    put(out, rec.state_after.temp);
    out << ',';
    put(out, rec.state_after.q);
    out << ',';
    put(out, rec.state_after.z);
    out << ',';
    put(out, rec.state_after.g_ess);
    out << ',';
    put(out, rec.h_after);
    out << ',';
    put(out, rec.k_after);
    out << ',';
    put(out, rec.phi1);
    out << ',';
    put(out, rec.phi2);
    out << ',' << rec.occupied_next << '\n';
  }
}

std::string summary_json(const RunSummary& s, const Policy& policy,
                         const HomeConfig& cfg) {
  nlohmann::json j;
  j["policy"] = policy_name(policy.kind);
  j["params"] = {{"V", policy.params.v},
                 {"Gamma", policy.params.gamma_shift},
                 {"alpha", policy.params.alpha_shift},
                 {"xi", policy.params.xi},
                 {"gamma", cfg.gamma},
                 {"eps", cfg.epsilon},
                 {"t_min", cfg.t_min}};
  j["totals"] = {{"energy", s.total_energy_cost},
                 {"discomfort", s.total_discomfort_cost},
                 {"total", s.total_cost}};
  j["atd"] = s.atd;
  j["max_ev_delay"] = s.max_ev_delay;
  j["temp_range"] = {s.temp_lo, s.temp_hi};
  j["ess_range"] = {s.ess_lo, s.ess_hi};
  j["queue_peaks"] = {s.q_peak, s.z_peak};
  j["theta_over_v"] =
      policy.params.v > 0.0 ? policy.bounds.theta / policy.params.v : 0.0;
  j["currency"] = cfg.currency;
  return j.dump(2) + "\n";
}

void write_sweep_csv(const std::vector<SweepRow>& rows, std::ostream& out) {
  out << "policy,param,value,V,Gamma,alpha,xi,gamma,eps,t_min,"
         "energy,discomfort,total,atd,max_ev_delay,"
         "temp_lo,temp_hi,ess_lo,ess_hi,q_peak,z_peak,theta_over_v\n";
  for (const auto& row : rows) {
    out << row.policy << ',' << row.param << ',';
    put(out, row.value);
    out << ',';
    put(out, row.params.v);
    out << ',';
    put(out, row.params.gamma_shift);
    out << ',';
    put(out, row.params.alpha_shift);
    out << ',';
    put(out, row.params.xi);
    out << ',';
    put(out, row.gamma);
    out << ',';
    put(out, row.epsilon);
    out << ',';
    put(out, row.t_min);
    out << ',';
    put(out, row.summary.total_energy_cost);
    out << ',';
    put(out, row.summary.total_discomfort_cost);
    out << ',';
    put(out, row.summary.total_cost);
    out << ',';
    put(out, row.summary.atd);
    out << ',' << row.summary.max_ev_delay << ',';
    put(out, row.summary.temp_lo);
    out << ',';
    put(out, row.summary.temp_hi);
    out << ',';
    put(out, row.summary.ess_lo);
    out << ',';
    put(out, row.summary.ess_hi);
    out << ',';
    put(out, row.summary.q_peak);
    out << ',';
    put(out, row.summary.z_peak);
    out << ',';
    put(out, row.params.v > 0.0 ? row.bounds.theta / row.params.v : 0.0);
    out << '\n';
  }
}

}  // namespace hems
