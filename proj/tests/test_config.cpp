#include <cmath>

#include <doctest.h>

#include "hems/config.hpp"
#include "support.hpp"

using namespace hems;

namespace {

HomeConfig wide_band_config(double epsilon) {
  HomeConfig cfg = default_home_config();
  cfg.epsilon = epsilon;
  return cfg;
}

}  // namespace

TEST_CASE("controllability margin psi") {
  CHECK(compute_psi(wide_band_config(0.985)) == doctest::Approx(1.95).epsilon(1e-12));
  CHECK(compute_psi(wide_band_config(0.9)) == doctest::Approx(13.0).epsilon(1e-12));

  HomeConfig frozen = wide_band_config(1.0);  // raw formula, not a valid config
  CHECK(compute_psi(frozen) == 0.0);
}

TEST_CASE("validation accepts the reference config") {
  const ValidatedConfig vcfg = validate_config(default_home_config());
  CHECK(vcfg.psi() == doctest::Approx(1.95).epsilon(1e-12));
}

TEST_CASE("sluggish home fails the band-slack assumption") {
  try {
    validate_config(wide_band_config(0.9));  // psi = 13 >= band 10
    FAIL("expected AssumptionViolated");
  } catch (const AssumptionViolated& e) {
    CHECK(e.which() == 19);
    CHECK(e.lhs() == doctest::Approx(13.0).epsilon(1e-12));
    CHECK(e.rhs() == doctest::Approx(10.0).epsilon(1e-12));
  }
}

TEST_CASE("hot outdoors fails the upper-band assumption") {
  HomeConfig cfg = default_home_config();
  cfg.t_out_max = 30.0;
  try {
    validate_config(cfg);
    FAIL("expected AssumptionViolated");
  } catch (const AssumptionViolated& e) {
    CHECK(e.which() == 17);
  }
}

TEST_CASE("undersized heater fails the floor assumption") {
  HomeConfig cfg = default_home_config();
  cfg.e_max = 0.5;
  cfg.t_out_min = 0.0;
  cfg.t_min = 15.0;  // 7.5 + 0 < 15
  try {
    validate_config(cfg);
    FAIL("expected AssumptionViolated");
  } catch (const AssumptionViolated& e) {
    CHECK(e.which() == 18);
  }
}

TEST_CASE("field range checks") {
  HomeConfig cfg = default_home_config();
  cfg.t_min = 26.0;  // inverted band
  CHECK_THROWS_AS(validate_config(cfg), RangeError);

  cfg = default_home_config();
  cfg.x_max = 2.0;  // below a_max = 3
  CHECK_THROWS_AS(validate_config(cfg), RangeError);

  cfg = default_home_config();
  cfg.epsilon = 1.0;
  CHECK_THROWS_AS(validate_config(cfg), RangeError);

  cfg = default_home_config();
  cfg.g_min_ess = cfg.g_max_ess;
  CHECK_THROWS_AS(validate_config(cfg), RangeError);
}

TEST_CASE("config JSON round trip") {
  const HomeConfig cfg = default_home_config();
  const HomeConfig back = parse_config_json(config_to_json(cfg));
  CHECK(back.epsilon == cfg.epsilon);
  CHECK(back.conductivity_a == cfg.conductivity_a);
  CHECK(back.r_tolerance == cfg.r_tolerance);
  CHECK(back.sell_ratio == cfg.sell_ratio);
  CHECK(back.currency == cfg.currency);
}

TEST_CASE("config JSON rejects unknown fields") {
  std::string text = config_to_json(default_home_config());
  text.insert(text.rfind('}'), ",\"mystery\": 1\n");
  CHECK_THROWS_AS(parse_config_json(text), RangeError);
}

TEST_CASE("config JSON accepts the time constant instead of epsilon") {
  HomeConfig cfg = default_home_config();
  const double omega = -1.0 / std::log(0.985);
  std::string text = config_to_json(cfg);
  const auto pos = text.find("\"epsilon\"");
  const auto end = text.find('\n', pos);
  text.replace(pos, end - pos, "\"omega\": " + std::to_string(omega) + ",");
  const HomeConfig parsed = parse_config_json(text);
  CHECK(parsed.epsilon == doctest::Approx(0.985).epsilon(1e-9));
}

TEST_CASE("config JSON requires exactly one inertia input") {
  std::string text = config_to_json(default_home_config());
  text.insert(text.rfind('}'), ",\"omega\": 66.0\n");
  CHECK_THROWS_AS(parse_config_json(text), RangeError);

  CHECK_THROWS_AS(parse_config_json("{\"eta\": 1.0}"), RangeError);
}

TEST_CASE("psi stays below the band for every accepted config") {
  Rng rng(2024);
  int accepted = 0;
  for (int i = 0; i < 500 && accepted < 200; ++i) {
    const HomeConfig cfg = test::random_config(rng);
    try {
      const ValidatedConfig vcfg = validate_config(cfg);
      ++accepted;
      CHECK(vcfg.psi() < cfg.t_max - cfg.t_min);
    } catch (const Error&) {
      // resample
    }
  }
  CHECK(accepted >= 200);
}
