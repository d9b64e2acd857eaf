#pragma once

#include <unistd.h>

#include <bit>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include "hems/config.hpp"
#include "hems/rng.hpp"

namespace hems::test {

/// Signed distance in representable doubles (0 means bit-identical).
inline std::uint64_t ulp_distance(double a, double b) {
  auto ordered = [](double x) -> std::int64_t {
    const auto bits = std::bit_cast<std::int64_t>(x);
    return bits < 0 ? std::numeric_limits<std::int64_t>::min() - bits : bits;
  };
  const std::int64_t ia = ordered(a), ib = ordered(b);
  return static_cast<std::uint64_t>(ia > ib ? ia - ib : ib - ia);
}

/// Random config that passes validation and parameter derivation most of
/// the time; callers resample on failure.
inline HomeConfig random_config(Rng& rng) {
  HomeConfig cfg = default_home_config();
  cfg.epsilon = rng.uniform(0.94, 0.995);
  cfg.conductivity_a = 1.0 / rng.uniform(8.0, 18.0);
  cfg.e_max = rng.uniform(5.0, 12.0);
  cfg.t_min = rng.uniform(12.0, 18.0);
  cfg.t_max = cfg.t_min + rng.uniform(6.0, 12.0);
  cfg.t_out_max = cfg.t_min + rng.uniform(-3.0, 4.0);
  if (cfg.t_out_max > cfg.t_max) cfg.t_out_max = cfg.t_max;
  cfg.t_out_min = cfg.t_out_max - rng.uniform(4.0, 10.0);
  cfg.t_ref_min = cfg.t_min + 0.6 * (cfg.t_max - cfg.t_min);
  cfg.t_ref_max = cfg.t_ref_min + rng.uniform(0.0, 1.0);
  if (cfg.t_ref_max > cfg.t_max) cfg.t_ref_max = cfg.t_max;
  cfg.b_min = rng.uniform(0.3, 0.6);
  cfg.b_max = cfg.b_min + rng.uniform(0.2, 0.6);
  cfg.s_min = cfg.sell_ratio * cfg.b_min;
  cfg.s_max = cfg.sell_ratio * cfg.b_max;
  cfg.gamma = rng.bernoulli(0.5) ? 0.0 : rng.uniform(0.0, 0.03);
  cfg.g_min_ess = rng.uniform(2.0, 6.0);
  cfg.g_max_ess = cfg.g_min_ess + rng.uniform(6.0, 20.0);
  cfg.u_cmax = rng.uniform(0.3, 1.5);
  cfg.u_dmax = rng.uniform(0.3, 1.5);
  cfg.v_max = rng.uniform(2.0, 4.0);
  cfg.a_max = rng.uniform(1.0, cfg.v_max);
  cfg.x_max = 40.0;  // generous service rate so the queue hypothesis holds
  cfg.r_tolerance = static_cast<int>(rng.uniform_int(2, 8));
  return cfg;
}

/// Unique scratch directory under the system temp dir, removed on scope
/// exit.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    static std::uint64_t counter = 0;
    path_ = std::filesystem::temp_directory_path() /
            ("hems_test_" + tag + "_" + std::to_string(::getpid()) + "_" +
             std::to_string(counter++));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

inline void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::string text((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  return text;
}

}  // namespace hems::test
