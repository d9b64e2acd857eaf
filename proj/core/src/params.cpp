#include "hems/params.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace hems {

namespace {

// Relative slack for the shift-range order checks: at V equal to a cap the
// range collapses to a point and the two closed forms agree only to
// round-off.
constexpr double kOrderTol = 1e-9;

void infeasible(const std::string& what) { throw InfeasibleParameters(what); }

}  // namespace

std::pair<ControllerParams, DerivedBounds> derive_controller_params(
    const ValidatedConfig& vcfg, const ParamOverrides& overrides) {
  const HomeConfig& cfg = vcfg.cfg();
  if (cfg.r_tolerance < 2)
    infeasible("r_tolerance must be >= 2 to derive the delay-queue rate");

  DerivedBounds b;
  const double eps = cfg.epsilon;
  const double one_m_eps = 1.0 - eps;
  const double hg = cfg.heat_gain();
  const double band = cfg.t_max - cfg.t_min;
  const double dt_out = cfg.t_out_max - cfg.t_out_min;
  const double dt_ref = cfg.t_ref_max - cfg.t_ref_min;
  const double spread = cfg.b_max - cfg.s_min;

  b.psi = vcfg.psi();
  b.d = band - b.psi;
  if (!(b.d > 0.0)) infeasible("comfort band leaves no slack (d <= 0)");

  // Width of the comfort-gradient coefficient range per unit of V. The HVAC
  // power enters in temperature units (hg * e_max); this makes
  // V <= v1_max equivalent to gamma_min <= gamma_max for every gamma.
  b.f = 2.0 * cfg.gamma * one_m_eps * one_m_eps * hg *
        (dt_out + hg * cfg.e_max + (eps * band + dt_ref) / one_m_eps);
  b.h = one_m_eps * (cfg.t_out_max + hg * cfg.e_max) - cfg.t_max;
  b.m = one_m_eps * cfg.t_out_min - cfg.t_min;

  if (!(spread + b.f > 0.0))
    infeasible("price spread b_max - s_min must be positive");
  b.v1_max = one_m_eps * hg * b.d / (spread + b.f);

  if (!(spread > 0.0)) infeasible("price spread b_max - s_min must be positive");
  b.v2_max = (cfg.g_max_ess - cfg.g_min_ess - (cfg.u_cmax + cfg.u_dmax)) / spread;
  if (!(b.v2_max > 0.0))
    infeasible("storage window too small for its power limits (v2_max <= 0)");

  const double v_cap = std::min(b.v1_max, b.v2_max);
  double v = v_cap;
  if (overrides.v) {
    v = *overrides.v;
    if (!(v > 0.0) || v > v_cap) {
      std::ostringstream os;
      os << "V override " << v << " outside (0, " << v_cap << "]";
      infeasible(os.str());
    }
  }

  // Worst-case comfort-gradient coefficients over the declared boxes; they
  // keep the shift ranges valid for any admissible trace.
  b.b_min_coeff = 2.0 * v * cfg.gamma * one_m_eps * one_m_eps * hg *
                  (cfg.t_out_min - (cfg.t_ref_max - eps * cfg.t_min) / one_m_eps);
  b.c_max_coeff =
      2.0 * v * cfg.gamma * one_m_eps * one_m_eps * hg *
      (cfg.t_out_max + hg * cfg.e_max - (cfg.t_ref_min - eps * cfg.t_max) / one_m_eps);

  const double phi = -eps * one_m_eps * hg;
  b.gamma_min = (v * cfg.s_min + b.b_min_coeff) / phi + b.h / eps;
  b.gamma_max = (v * cfg.b_max + b.c_max_coeff) / phi + b.m / eps;
  if (b.gamma_min > b.gamma_max + kOrderTol * std::max(1.0, std::fabs(b.gamma_max)))
    infeasible("temperature-shift range is empty (gamma_min > gamma_max)");

  b.alpha_min = -v * cfg.s_min + cfg.u_cmax - cfg.g_max_ess;
  b.alpha_max = -v * cfg.b_max - cfg.u_dmax - cfg.g_min_ess;
  if (b.alpha_min > b.alpha_max + kOrderTol * std::max(1.0, std::fabs(b.alpha_max)))
    infeasible("storage-shift range is empty (alpha_min > alpha_max)");

  ControllerParams p;
  p.v = v;
  p.gamma_shift = b.gamma_max;
  p.alpha_shift = b.alpha_max;
  p.xi = (2.0 * v * cfg.b_max + cfg.v_max) / (cfg.r_tolerance - 1);

  if (cfg.x_max < std::max(cfg.a_max, p.xi)) {
    std::ostringstream os;
    os << "x_max " << cfg.x_max << " below max(a_max, xi) = "
       << std::max(cfg.a_max, p.xi) << "; queue bounds would not hold";
    infeasible(os.str());
  }

  b.q_max = v * cfg.b_max + cfg.a_max;
  b.z_max = v * cfg.b_max + p.xi;
  // nudge below the ceiling so a ratio landing exactly on an integer (the
  // default xi does) is not rounded up
  b.d_max = static_cast<int>(
      std::ceil((2.0 * v * cfg.b_max + cfg.a_max + p.xi) / p.xi - 1e-9));
  if (b.d_max > cfg.r_tolerance) {
    std::ostringstream os;
    os << "worst-case delay " << b.d_max << " exceeds tolerance " << cfg.r_tolerance;
    infeasible(os.str());
  }

  const PerformanceGap gap = compute_performance_gap(cfg, p);
  b.omega_0 = gap.omega_0;
  b.omega_1 = gap.omega_1;
  b.omega_2 = gap.omega_2;
  b.omega_3 = gap.omega_3;
  b.upsilon = gap.upsilon;
  b.theta = gap.theta;

  return {p, b};
}

PerformanceGap compute_performance_gap(const HomeConfig& cfg,
                                       const ControllerParams& params) {
  const double eps = cfg.epsilon;
  const double one_m_eps = 1.0 - eps;
  const double hg = cfg.heat_gain();
  const double shift = params.gamma_shift;

  PerformanceGap gap;
  const double lo = shift + cfg.t_out_min;
  const double hi = shift + cfg.t_out_max + hg * cfg.e_max;
  gap.omega_0 = 0.5 * one_m_eps * one_m_eps * std::max(lo * lo, hi * hi);
  gap.omega_1 = 0.5 * (cfg.x_max * cfg.x_max + cfg.a_max * cfg.a_max);
  gap.omega_2 = 0.5 * std::max(params.xi * params.xi, cfg.x_max * cfg.x_max);
  const double u = std::max(cfg.u_cmax, cfg.u_dmax);
  gap.omega_3 = 0.5 * u * u;
  const double top = cfg.t_max + shift;
  gap.upsilon = eps * one_m_eps * top * (top + (cfg.t_out_max - cfg.t_out_min));
  gap.theta = gap.omega_0 + gap.omega_1 + gap.omega_2 + gap.omega_3 + gap.upsilon;
  gap.gap_per_v = params.v > 0.0 ? gap.theta / params.v : 0.0;
  return gap;
}

}  // namespace hems
