#include <cmath>

#include <doctest.h>

#include "hems/solver.hpp"
#include "support.hpp"

using namespace hems;

namespace {

// Reference instance on the derived parameter set; gamma = 0 unless a case
// says otherwise.
P2Instance reference_instance() {
  const ValidatedConfig vcfg = validate_config(default_home_config());
  const auto [params, bounds] = derive_controller_params(vcfg);
  const HomeConfig& cfg = vcfg.cfg();

  SystemState state;
  state.temp = 20.0;
  state.q = 0.0;
  state.z = 0.0;
  state.g_ess = 12.0;

  SlotObservation obs;
  obs.price_buy = 1.0;
  obs.price_sell = 0.45;
  obs.t_out = 5.0;
  obs.solar_rho = 0.0;
  obs.t_ref_next = 22.5;
  obs.occupied_next = 1;

  P2Instance in = make_p2_instance(state, obs, params, cfg);
  // park the storage pressure between the two price thresholds so y does
  // not distort the forced cases
  in.k = -0.5 * (params.v * 1.0 + params.v * 0.45);
  return in;
}

bool in_box(const Decision& d, const P2Instance& in) {
  return d.e >= 0.0 && d.e <= in.e_max && d.x >= 0.0 && d.x <= in.x_cap &&
         d.y >= -in.u_dmax && d.y <= in.u_cmax;
}

}  // namespace

TEST_CASE("hvac threshold coefficients") {
  P2Instance in = reference_instance();

  SUBCASE("zero weight") {
    in.gamma = 0.0;
    const auto [b, c] = hvac_thresholds(in);
    CHECK(b == 0.0);
    CHECK(c == 0.0);
  }
  SUBCASE("vacancy") {
    in.gamma = 0.01;
    in.occupied_next = 0.0;
    const auto [b, c] = hvac_thresholds(in);
    CHECK(b == 0.0);
    CHECK(c == 0.0);
  }
  SUBCASE("worked values") {
    // re-derived by tests/verify_bounds.py
    in.v = 3.29318;
    in.gamma = 0.01;
    in.occupied_next = 1.0;
    in.temp = 20.0;
    in.t_out = 5.0;
    in.t_ref_next = 22.5;
    const auto [b, c] = hvac_thresholds(in);
    CHECK(b == doctest::Approx(-0.04038261975).epsilon(1e-12));
    CHECK(c == doctest::Approx(-0.01370786175).epsilon(1e-12));
  }
}

TEST_CASE("forced EV service decisions") {
  P2Instance in = reference_instance();
  const double vb_max = in.v * 1.0;   // 3.29318...
  const double vs_min = in.v * 0.45;  // 1.48193...

  SUBCASE("backlog pressure above the buy threshold forces full service") {
    in.q = 5.0;
    in.z = 0.0;
    in.x_cap = std::min(3.0, in.q);
    REQUIRE(in.q + in.z > vb_max);
    const Decision d = solve_p2(in);
    CHECK(d.x == 3.0);
  }
  SUBCASE("backlog pressure below the sell threshold forces idling") {
    in.q = 1.0;
    in.z = 0.0;
    in.x_cap = std::min(3.0, in.q);
    REQUIRE(in.q + in.z < vs_min);
    const Decision d = solve_p2(in);
    CHECK(d.x == 0.0);
  }
}

TEST_CASE("forced HVAC decisions") {
  P2Instance in = reference_instance();

  SUBCASE("warm home keeps the heater off") {
    in.temp = 24.0;
    in.h = in.temp + in.gamma_shift;  // -6.0877...
    const double pressure = -in.epsilon * (1 - in.epsilon) * in.h * in.heat_gain;
    REQUIRE(pressure < in.v * 0.45);  // 1.3492 < 1.4819
    const Decision d = solve_p2(in);
    CHECK(d.e == 0.0);
  }
  SUBCASE("cold home saturates the heater") {
    in.temp = 15.0;
    in.h = in.temp + in.gamma_shift;  // -15.0877...
    const double pressure = -in.epsilon * (1 - in.epsilon) * in.h * in.heat_gain;
    REQUIRE(pressure > in.v * 1.0);  // 3.3438 > 3.2932
    const Decision d = solve_p2(in);
    CHECK(d.e == in.e_max);
  }
}

TEST_CASE("degenerate boxes collapse to the unique point") {
  P2Instance in = reference_instance();
  in.e_max = 0.0;
  in.q = 0.0;
  in.z = 0.0;
  in.x_cap = 0.0;
  in.u_cmax = 0.0;
  in.u_dmax = 0.0;
  in.pv = 2.0;

  const Decision d = solve_p2(in);
  CHECK(d.e == 0.0);
  CHECK(d.x == 0.0);
  CHECK(d.y == 0.0);
  CHECK(d.g == -2.0);

  const Decision o = oracle_p2(in, 11);
  CHECK(o.e == 0.0);
  CHECK(o.g == -2.0);
  CHECK(o.objective == d.objective);
}

TEST_CASE("equal prices use the buy branch deterministically") {
  P2Instance in = reference_instance();
  in.price_buy = in.price_sell = 0.7;
  // zero out every linear coefficient: all minimizer boxes are full
  in.k = -in.v * 0.7;
  in.q = in.v * 0.7;
  in.z = 0.0;
  in.x_cap = 3.0;
  in.gamma = 0.0;
  in.h = -in.v * 0.7 / (in.epsilon * (1 - in.epsilon) * in.heat_gain);
  in.pv = 0.0;

  const Decision d1 = solve_p2(in);
  const Decision d2 = solve_p2(in);
  CHECK(d1.e == d2.e);
  CHECK(d1.x == d2.x);
  CHECK(d1.y == d2.y);
  // ties resolve toward zero exchange, then the smallest components
  CHECK(d1.g == 0.0);
  CHECK(d1.e == 0.0);
  CHECK(d1.x == 0.0);
  CHECK(d1.y == 0.0);
}

TEST_CASE("idle home with equal prices discharges by the sign rules") {
  // no renewables, equal prices, positive storage pressure, light backlog,
  // warm home: the heater and EV idle and the storage may only discharge
  P2Instance in = reference_instance();
  in.price_buy = in.price_sell = 0.7;
  in.pv = 0.0;
  in.gamma = 0.0;
  in.temp = 24.0;
  in.h = in.temp + in.gamma_shift;
  in.q = 1.0;
  in.z = 0.0;
  in.x_cap = 1.0;
  in.k = 2.0;  // above every discharge threshold
  REQUIRE(in.q + in.z < in.v * 0.45);

  const Decision d = solve_p2(in);
  CHECK(d.e == 0.0);
  CHECK(d.x == 0.0);
  CHECK(d.y == -in.u_dmax);
  CHECK(d.g == -in.u_dmax);

  const Decision o = oracle_p2(in, 21);
  CHECK(o.e == 0.0);
  CHECK(o.x == 0.0);
  CHECK(o.y == -in.u_dmax);
}

TEST_CASE("malformed boxes raise a numerical failure") {
  P2Instance in = reference_instance();
  in.e_max = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(solve_p2(in), NumericalFailure);
  in = reference_instance();
  in.x_cap = -1.0;
  CHECK_THROWS_AS(solve_p2(in), NumericalFailure);
}

TEST_CASE("one-shot lattice error obeys the Lipschitz bound") {
  // the coarse oracle may only exceed the exact optimum by the objective's
  // Lipschitz constant times the lattice spacing
  const HomeConfig cfg = default_home_config();
  Rng rng(1618);
  const int n = 9;
  for (int i = 0; i < 300; ++i) {
    const P2Instance in = sample_p2_instance(rng, cfg);
    const Decision exact = solve_p2(in);
    const Decision coarse = oracle_p2(in, n);

    const double slope = (1.0 - in.epsilon) * in.heat_gain;
    const double w = in.v * in.gamma * in.occupied_next;
    const double dev_max =
        std::max(std::fabs(in.epsilon * in.temp + (1 - in.epsilon) * in.t_out -
                           in.t_ref_next),
                 std::fabs(in.epsilon * in.temp +
                           (1 - in.epsilon) * (in.t_out + in.heat_gain * in.e_max) -
                           in.t_ref_next));
    const double price = std::max(std::fabs(in.price_buy), std::fabs(in.price_sell));
    const double grad_e = std::fabs(in.epsilon * (1 - in.epsilon) * in.h *
                                    in.heat_gain) +
                          in.v * price + 2.0 * w * slope * dev_max;
    const double grad_x = (in.q + in.z) + in.v * price;
    const double grad_y = std::fabs(in.k) + in.v * price;
    const double bound = 0.5 * (grad_e * in.e_max / (n - 1) +
                                grad_x * in.x_cap / (n - 1) +
                                grad_y * (in.u_cmax + in.u_dmax) / (n - 1));

    CHECK(exact.objective <= coarse.objective + 1e-12);
    CHECK(coarse.objective - exact.objective <= bound + 1e-9);
  }
}

TEST_CASE("solver matches the refined grid oracle on random instances") {
  const HomeConfig cfg = default_home_config();
  Rng rng(314);
  for (int i = 0; i < 500; ++i) {
    const P2Instance in = sample_p2_instance(rng, cfg);
    const Decision got = solve_p2(in);
    const Decision ref = oracle_p2_refined(in, 17, 3);
    CHECK(got.objective <= ref.objective + 1e-6 * (1.0 + std::fabs(ref.objective)));
    CHECK(in_box(got, in));
    CHECK(got.g == ((got.e + got.x) + got.y) - in.pv);
  }
}

TEST_CASE("threshold properties hold on random instances") {
  const HomeConfig cfg = default_home_config();
  Rng rng(2718);
  const double tol = 1e-12;
  for (int i = 0; i < 3000; ++i) {
    const P2Instance in = sample_p2_instance(rng, cfg);
    const Decision d = solve_p2(in);

    const auto [b_t, c_t] = hvac_thresholds(in);
    const double pressure = -in.epsilon * (1.0 - in.epsilon) * in.h * in.heat_gain;
    if (in.v * cfg.s_min + b_t > pressure) CHECK(std::fabs(d.e) <= tol);
    if (in.v * cfg.b_max + c_t < pressure) CHECK(d.e >= in.e_max - tol);
    if (in.q + in.z < in.v * cfg.s_min) CHECK(std::fabs(d.x) <= tol);
    if (in.q + in.z > in.v * cfg.b_max) CHECK(d.x >= in.x_cap - tol);
    if (in.k > -in.v * cfg.s_min) CHECK(d.y <= tol);
    if (in.k < -in.v * cfg.b_max) CHECK(d.y >= -tol);
  }
}

TEST_CASE("balance branch meets its tolerance") {
  // force the zero branch: at the buy price the storage discharges and the
  // home would sell, at the sell price it charges and would buy
  P2Instance in = reference_instance();
  in.gamma = 0.0;
  in.pv = 0.5;
  in.temp = 24.0;  // heater off under both prices
  in.h = in.temp + in.gamma_shift;
  in.q = 0.5;
  in.z = 0.0;
  in.x_cap = 0.5;
  in.k = -0.5 * (in.v * 1.0 + in.v * 0.45);
  in.price_buy = 1.0;
  in.price_sell = 0.45;

  const Decision d = solve_p2(in);
  CHECK(std::fabs(d.e + d.x + d.y - in.pv) <= 1e-9 * std::max(1.0, in.pv));
  CHECK(d.e == 0.0);
  CHECK(d.x == 0.0);
  CHECK(d.y == doctest::Approx(0.5).epsilon(1e-9));
  const Decision ref = oracle_p2_refined(in, 33, 4);
  CHECK(d.objective <= ref.objective + 1e-6 * (1.0 + std::fabs(ref.objective)));
}
