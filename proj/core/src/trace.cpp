#include "hems/trace.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <string_view>

#include "hems/rng.hpp"

namespace hems {

namespace {

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find(',', start);
    if (pos == std::string_view::npos) {
      out.push_back(line.substr(start));
      break;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
  return out;
}

double parse_double(std::string_view s, std::size_t line, std::size_t column) {
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc{} || ptr != s.data() + s.size())
    throw ParseError(line, column, "expected a number, got '" + std::string(s) + "'");
  return value;
}

long parse_long(std::string_view s, std::size_t line, std::size_t column) {
  long value = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc{} || ptr != s.data() + s.size())
    throw ParseError(line, column, "expected an integer, got '" + std::string(s) + "'");
  return value;
}

std::vector<std::string> read_lines(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(0, 0, "cannot open file: " + path.string());
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(line);
  }
  while (!lines.empty() && lines.back().empty()) lines.pop_back();
  return lines;
}

// shortest representation that parses back to the same double
std::string format_exact(double v) {
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

void check_bounds(bool ok, std::size_t slot, const char* field, double value,
                  double lo, double hi) {
  if (ok) return;
  std::ostringstream os;
  os << field << " = " << value << " at slot " << slot << " outside [" << lo
     << ", " << hi << "]";
  throw BoundsError(slot, field, os.str());
}

}  // namespace

TraceBundle load_trace_csv(const std::filesystem::path& path, const HomeConfig& cfg) {
  const auto lines = read_lines(path);
  if (lines.empty()) throw ParseError(1, 1, "empty trace file: " + path.string());

  const auto header = split_fields(lines[0]);
  static const std::vector<std::string_view> kPlain = {"t",   "T_out", "B",
                                                       "rho", "pi",    "T_ref"};
  static const std::vector<std::string_view> kWithSell = {
      "t", "T_out", "B", "S", "rho", "pi", "T_ref"};

  bool has_sell;
  if (std::equal(header.begin(), header.end(), kPlain.begin(), kPlain.end())) {
    has_sell = false;
  } else if (std::equal(header.begin(), header.end(), kWithSell.begin(),
                        kWithSell.end())) {
    has_sell = true;
  } else {
    for (const auto expected : kPlain)
      if (std::find(header.begin(), header.end(), expected) == header.end())
        throw MissingColumn(std::string(expected));
    throw ParseError(1, 1, "malformed trace header: '" + lines[0] + "'");
  }
  const std::size_t n_cols = has_sell ? 7 : 6;

  TraceBundle b;
  for (std::size_t row = 1; row < lines.size(); ++row) {
    const auto fields = split_fields(lines[row]);
    const std::size_t line_no = row + 1;
    if (fields.size() != n_cols) {
      std::ostringstream os;
      os << "expected " << n_cols << " fields, got " << fields.size();
      throw ParseError(line_no, fields.size(), os.str());
    }
    const std::size_t slot = row - 1;
    std::size_t col = 0;
    auto next_double = [&]() {
      ++col;
      return parse_double(fields[col - 1], line_no, col);
    };
    const long t = parse_long(fields[0], line_no, 1);
    if (t != static_cast<long>(slot))
      throw ParseError(line_no, 1, "slot index out of order");
    ++col;
    const double t_out = next_double();
    const double buy = next_double();
    const double sell = has_sell ? next_double() : cfg.sell_ratio * buy;
    const double rho = next_double();
    ++col;
    const long pi = parse_long(fields[col - 1], line_no, col);
    const double t_ref = next_double();

    check_bounds(t_out >= cfg.t_out_min && t_out <= cfg.t_out_max, slot, "T_out",
                 t_out, cfg.t_out_min, cfg.t_out_max);
    check_bounds(buy >= cfg.b_min && buy <= cfg.b_max, slot, "B", buy, cfg.b_min,
                 cfg.b_max);
    check_bounds(sell >= cfg.s_min && sell <= cfg.s_max, slot, "S", sell,
                 cfg.s_min, cfg.s_max);
    if (!(buy >= sell)) {
      std::ostringstream os;
      os << "sell price " << sell << " exceeds buy price " << buy << " at slot "
         << slot;
      throw BoundsError(slot, "S", os.str());
    }
    check_bounds(rho >= 0.0, slot, "rho", rho, 0.0,
                 std::numeric_limits<double>::infinity());
    if (pi != 0 && pi != 1)
      throw BoundsError(slot, "pi", "pi must be 0 or 1 at slot " + std::to_string(slot));
    check_bounds(t_ref >= cfg.t_ref_min && t_ref <= cfg.t_ref_max, slot, "T_ref",
                 t_ref, cfg.t_ref_min, cfg.t_ref_max);

    b.outdoor_temp.push_back(t_out);
    b.buy_price.push_back(buy);
    b.sell_price.push_back(sell);
    b.solar_rho.push_back(rho);
    b.occupied.push_back(static_cast<int>(pi));
    b.t_ref.push_back(t_ref);
  }
  return b;
}

void write_trace_csv(const TraceBundle& bundle, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write trace file: " + path.string(), false);
  out << "t,T_out,B,S,rho,pi,T_ref\n";
  for (std::size_t t = 0; t < bundle.n_slots(); ++t) {
    out << t << ',' << format_exact(bundle.outdoor_temp[t]) << ','
        << format_exact(bundle.buy_price[t]) << ','
        << format_exact(bundle.sell_price[t]) << ','
        << format_exact(bundle.solar_rho[t]) << ',' << bundle.occupied[t] << ','
        << format_exact(bundle.t_ref[t]) << '\n';
  }
}

std::vector<int> occupancy_from_steps(const StepTrace& trace, long threshold) {
  if (threshold <= 0) throw RangeError("threshold", "step threshold must be positive");
  std::vector<int> occupied(trace.steps.size());
  for (std::size_t i = 0; i < trace.steps.size(); ++i) {
    if (trace.steps[i] < 0)
      throw RangeError("steps", "step counts must be nonnegative");
    // strictly more steps than the threshold means the occupant was out
    occupied[i] = trace.steps[i] > threshold ? 0 : 1;
  }
  return occupied;
}

// ---------------------------------------------------------------------------
// EV requests
// ---------------------------------------------------------------------------

std::vector<double> arrivals_from_requests(const std::vector<EvRequest>& requests,
                                           std::size_t n_slots, const HomeConfig& cfg) {
  std::vector<double> a(n_slots, 0.0);
  for (const auto& req : requests) {
    const long k = req.kappa(cfg.v_max);
    for (long t = req.start; t <= req.start + k; ++t) {
      if (t < 0 || t >= static_cast<long>(n_slots)) {
        std::ostringstream os;
        os << "request starting at slot " << req.start
           << " submits energy outside the horizon";
        throw BoundsError(static_cast<std::size_t>(req.start), "s", os.str());
      }
      a[static_cast<std::size_t>(t)] += ev_arrival_at(req, t, cfg.v_max);
    }
  }
  for (std::size_t t = 0; t < n_slots; ++t) {
    if (a[t] > cfg.a_max + 1e-9) {
      std::ostringstream os;
      os << "arrival " << a[t] << " at slot " << t << " exceeds a_max " << cfg.a_max;
      throw BoundsError(t, "a", os.str());
    }
  }
  return a;
}

std::pair<std::vector<EvRequest>, std::vector<double>> generate_ev_requests(
    std::uint64_t seed, int n_days, const EvWindow& window, const EvEnergyDist& dist,
    const HomeConfig& cfg, std::size_t n_slots) {
  if (dist.lo < 0 || dist.hi < dist.lo)
    throw RangeError("e_dist", "energy distribution requires 0 <= lo <= hi");

  const int len = ((window.end_hour - window.start_hour) % 24 + 24) % 24;
  const int window_len = len == 0 ? 24 : len;
  const long kappa_max =
      static_cast<long>(std::floor(static_cast<double>(dist.hi) / cfg.v_max));
  const long tol = window_len - kappa_max;
  if (tol < 1) {
    std::ostringstream os;
    os << "charging window of " << window_len
       << " slots cannot absorb the largest request (kappa " << kappa_max << ")";
    throw WindowTooShort(os.str());
  }
  if (tol != cfg.r_tolerance) {
    std::ostringstream os;
    os << "window delay tolerance " << tol << " does not match configured R "
       << cfg.r_tolerance;
    throw RangeError("window", os.str());
  }

  Rng rng(seed);
  std::vector<EvRequest> requests;
  for (int day = 0; day < n_days; ++day) {
    const double energy = static_cast<double>(rng.uniform_int(dist.lo, dist.hi));
    EvRequest req;
    req.start = 24L * day + window.start_hour;
    req.energy = energy;
    req.deadline = req.start + req.kappa(cfg.v_max) + cfg.r_tolerance;
    // only emit requests whose service can complete inside the horizon
    if (req.deadline <= static_cast<long>(n_slots) - 2) requests.push_back(req);
  }
  return {requests, arrivals_from_requests(requests, n_slots, cfg)};
}

std::vector<EvRequest> load_ev_csv(const std::filesystem::path& path,
                                   const HomeConfig& cfg) {
  const auto lines = read_lines(path);
  if (lines.empty()) throw ParseError(1, 1, "empty EV file: " + path.string());
  if (lines[0] != "s,c,E") {
    const auto header = split_fields(lines[0]);
    for (const char* expected : {"s", "c", "E"})
      if (std::find(header.begin(), header.end(), std::string_view(expected)) ==
          header.end())
        throw MissingColumn(expected);
    throw ParseError(1, 1, "malformed EV header: '" + lines[0] + "'");
  }
  std::vector<EvRequest> requests;
  for (std::size_t row = 1; row < lines.size(); ++row) {
    const auto fields = split_fields(lines[row]);
    const std::size_t line_no = row + 1;
    if (fields.size() != 3)
      throw ParseError(line_no, fields.size(), "expected 3 fields");
    EvRequest req;
    req.start = parse_long(fields[0], line_no, 1);
    req.deadline = parse_long(fields[1], line_no, 2);
    req.energy = parse_double(fields[2], line_no, 3);
    if (req.energy < 0.0)
      throw BoundsError(row - 1, "E", "negative energy demand");
    const long tol = req.deadline - req.start - req.kappa(cfg.v_max);
    if (tol != cfg.r_tolerance) {
      std::ostringstream os;
      os << "request at line " << line_no << " has delay tolerance " << tol
         << ", configured R is " << cfg.r_tolerance;
      throw BoundsError(row - 1, "c", os.str());
    }
    requests.push_back(req);
  }
  return requests;
}

void write_ev_csv(const std::vector<EvRequest>& requests,
                  const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write EV file: " + path.string(), false);
  out << "s,c,E\n";
  for (const auto& req : requests)
    out << req.start << ',' << req.deadline << ',' << format_exact(req.energy)
        << '\n';
}

// ---------------------------------------------------------------------------
// synthetic inputs
// ---------------------------------------------------------------------------

namespace {

constexpr double kPi = 3.14159265358979323846;

}  // namespace

SyntheticTrace generate_synthetic_trace(int days, std::uint64_t seed,
                                        const HomeConfig& cfg) {
  if (days < 1) throw RangeError("days", "need at least one day");
  const std::size_t n = static_cast<std::size_t>(days) * 24;

  SyntheticTrace out;
  TraceBundle& b = out.bundle;
  b.outdoor_temp.resize(n);
  b.buy_price.resize(n);
  b.sell_price.resize(n);
  b.solar_rho.resize(n);
  b.t_ref.resize(n);
  out.steps.steps.resize(n);

  Rng rng(seed);
  const double t_mid = 0.5 * (cfg.t_out_min + cfg.t_out_max);
  const double t_amp = 0.42 * (cfg.t_out_max - cfg.t_out_min);
  const double price_range = cfg.b_max - cfg.b_min;
  const double t_ref_mid = 0.5 * (cfg.t_ref_min + cfg.t_ref_max);

  for (std::size_t t = 0; t < n; ++t) {
    const int hour = static_cast<int>(t % 24);
    const int day = static_cast<int>(t / 24);
    const bool weekday = day % 7 < 5;

    // diurnal outdoor temperature peaking mid afternoon
    double t_out = t_mid + t_amp * std::sin(2.0 * kPi * (hour - 9) / 24.0) +
                   rng.uniform(-0.3, 0.3);
    b.outdoor_temp[t] = std::clamp(t_out, cfg.t_out_min, cfg.t_out_max);

    // two-tier retail price, peak 08:00-18:59
    const bool peak = hour >= 8 && hour < 19;
    double buy = peak ? cfg.b_min + price_range * (0.60 + 0.08 * rng.next_double())
                      : cfg.b_min + price_range * (0.12 + 0.08 * rng.next_double());
    buy = std::clamp(buy, cfg.b_min, cfg.b_max);
    b.buy_price[t] = buy;
    b.sell_price[t] =
        std::clamp(cfg.sell_ratio * buy, cfg.s_min, std::min(cfg.s_max, buy));

    // clipped-sine radiation, zero at night, per-slot cloud factor
    double rho = 0.0;
    if (hour >= 7 && hour <= 17) {
      rho = 850.0 * std::sin(kPi * (hour - 6) / 12.0) * rng.uniform(0.6, 1.0);
      rho = std::max(rho, 0.0);
    }
    b.solar_rho[t] = rho;

    // step counts: quiet nights, weekday work-hour absences
    long steps;
    if (hour >= 22 || hour <= 6) {
      steps = rng.uniform_int(0, 250);
    } else if (weekday && hour >= 9 && hour <= 17) {
      steps = rng.uniform_int(2400, 5200);
    } else {
      steps = rng.uniform_int(150, 1500);
    }
    out.steps.steps[t] = steps;

    b.t_ref[t] = t_ref_mid;
  }
  b.occupied = occupancy_from_steps(out.steps, 1800);
  return out;
}

}  // namespace hems
