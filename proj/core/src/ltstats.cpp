#include "bullwhip/ltstats.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <numeric>
#include <sstream>

#include "bullwhip/errors.hpp"
#include "bullwhip/random.hpp"

namespace bullwhip {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) fields.push_back(trim(field));
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

bool all_digits(const std::string& s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](unsigned char c) {
    return std::isdigit(c) != 0;
  });
}

}  // namespace

std::chrono::sys_days parse_iso_date(const std::string& text) {
  using namespace std::chrono;
  if (text.size() != 10 || text[4] != '-' || text[7] != '-' ||
      !all_digits(text.substr(0, 4)) || !all_digits(text.substr(5, 2)) ||
      !all_digits(text.substr(8, 2))) {
    throw ParseError("invalid date '" + text + "' (expected YYYY-MM-DD)");
  }
  const year_month_day ymd{year{std::stoi(text.substr(0, 4))},
                           month{static_cast<unsigned>(std::stoi(text.substr(5, 2)))},
                           day{static_cast<unsigned>(std::stoi(text.substr(8, 2)))}};
  if (!ymd.ok()) throw ParseError("invalid calendar date '" + text + "'");
  return sys_days{ymd};
}

std::string format_iso_date(std::chrono::sys_days d) {
  using namespace std::chrono;
  const year_month_day ymd{d};
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()),
                static_cast<unsigned>(ymd.day()));
  return buf;
}

std::vector<OrderRecord> load_orders(std::istream& in) {
  std::vector<OrderRecord> records;
  std::vector<std::string> problems;
  std::string line;
  std::size_t line_no = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto fields = split_csv_line(line);
    if (!header_seen) {
      header_seen = true;
      if (fields.size() != 3 || fields[0] != "order_date" ||
          fields[1] != "delivery_date" || fields[2] != "quantity") {
        throw ParseError(
            "line " + std::to_string(line_no) +
            ": expected header 'order_date,delivery_date,quantity'");
      }
      continue;
    }
    try {
      if (fields.size() != 3) {
        throw ParseError("expected 3 fields, got " +
                         std::to_string(fields.size()));
      }
      OrderRecord r;
      r.order_date = parse_iso_date(fields[0]);
      r.delivery_date = parse_iso_date(fields[1]);
      std::size_t used = 0;
      try {
        r.quantity = std::stod(fields[2], &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used == 0 || used != fields[2].size() || !std::isfinite(r.quantity)) {
        throw ParseError("invalid quantity '" + fields[2] + "'");
      }
      if (r.delivery_date < r.order_date) {
        throw ParseError("delivery date precedes order date");
      }
      records.push_back(r);
    } catch (const ParseError& e) {
      problems.push_back("line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  if (!problems.empty()) {
    std::ostringstream msg;
    msg << problems.size() << " malformed row(s)";
    const std::size_t shown = std::min<std::size_t>(problems.size(), 10);
    for (std::size_t i = 0; i < shown; ++i) msg << "\n  " << problems[i];
    if (shown < problems.size()) msg << "\n  ...";
    throw ParseError(msg.str());
  }
  if (records.empty()) throw ParseError("order log contains no orders");
  return records;
}

std::vector<OrderRecord> load_orders_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open order log '" + path + "'");
  return load_orders(in);
}

std::vector<DailyLeadTime> daily_average_lead_time(
    std::span<const OrderRecord> records) {
  std::map<std::chrono::sys_days, std::pair<double, std::size_t>> by_day;
  for (const auto& r : records) {
    auto& [sum, count] = by_day[r.order_date];
    sum += r.lead_time_days();
    ++count;
  }
  std::vector<DailyLeadTime> out;
  out.reserve(by_day.size());
  for (const auto& [day, acc] : by_day) {
    out.push_back({day, acc.first / static_cast<double>(acc.second),
                   acc.second});
  }
  return out;
}

std::vector<double> lead_times(std::span<const OrderRecord> records) {
  std::vector<double> out;
  out.reserve(records.size());
  for (const auto& r : records) out.push_back(r.lead_time_days());
  return out;
}

// ---------------------------------------------------------------------------

double Correlogram::fraction_inside_band() const {
  if (coefficients.size() < 2) return 1.0;
  std::size_t inside = 0;
  for (std::size_t k = 1; k < coefficients.size(); ++k) {
    if (std::abs(coefficients[k]) <= band) ++inside;
  }
  return static_cast<double>(inside) /
         static_cast<double>(coefficients.size() - 1);
}

Correlogram acf(std::span<const double> series, int max_lag) {
  if (max_lag < 0) throw ConfigError("max_lag must be >= 0");
  const std::size_t n = series.size();
  if (n <= static_cast<std::size_t>(max_lag) + 1) {
    throw InsufficientData("series of length " + std::to_string(n) +
                           " too short for lag " + std::to_string(max_lag));
  }
  const double mean =
      std::accumulate(series.begin(), series.end(), 0.0) / static_cast<double>(n);
  double denom = 0.0;
  for (double x : series) denom += (x - mean) * (x - mean);
  if (!(denom > 0.0)) throw ConstantSeries("series has zero variance");

  Correlogram out;
  out.band = 1.96 / std::sqrt(static_cast<double>(n));
  out.coefficients.resize(static_cast<std::size_t>(max_lag) + 1);
  out.coefficients[0] = 1.0;
  for (int k = 1; k <= max_lag; ++k) {
    double num = 0.0;
    for (std::size_t t = 0; t + static_cast<std::size_t>(k) < n; ++t) {
      num += (series[t] - mean) * (series[t + static_cast<std::size_t>(k)] - mean);
    }
    out.coefficients[static_cast<std::size_t>(k)] = num / denom;
  }
  return out;
}

Correlogram pacf(std::span<const double> series, int max_lag) {
  const Correlogram r = acf(series, max_lag);
  Correlogram out;
  out.band = r.band;
  out.coefficients.assign(r.coefficients.size(), 0.0);
  if (max_lag == 0) return out;

  const auto& rho = r.coefficients;
  std::vector<double> phi(static_cast<std::size_t>(max_lag) + 1, 0.0);
  std::vector<double> previous(phi.size(), 0.0);
  double error = 1.0;  // prediction-error variance relative to r_0
  for (int k = 1; k <= max_lag; ++k) {
    double num = rho[static_cast<std::size_t>(k)];
    for (int j = 1; j < k; ++j) {
      num -= previous[static_cast<std::size_t>(j)] *
             rho[static_cast<std::size_t>(k - j)];
    }
    if (!(error > 1e-12)) {
      throw SingularRecursion("Durbin-Levinson recursion became singular at lag " +
                              std::to_string(k));
    }
    const double reflection = num / error;
    phi[static_cast<std::size_t>(k)] = reflection;
    for (int j = 1; j < k; ++j) {
      phi[static_cast<std::size_t>(j)] =
          previous[static_cast<std::size_t>(j)] -
          reflection * previous[static_cast<std::size_t>(k - j)];
    }
    error *= (1.0 - reflection * reflection);
    out.coefficients[static_cast<std::size_t>(k)] = reflection;
    previous = phi;
  }
  return out;
}

// ---------------------------------------------------------------------------

double kolmogorov_survival(double x) {
  if (x <= 0.0) return 1.0;
  // The alternating series converges too slowly near zero, where Q is 1 to
  // double precision anyway.
  if (x < 0.18) return 1.0;
  double sum = 0.0;
  double sign = 1.0;
  for (int k = 1; k <= 100; ++k) {
    const double term = std::exp(-2.0 * k * k * x * x);
    sum += sign * term;
    if (term < 1e-17) break;
    sign = -sign;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

KsResult ks_two_sample(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) {
    throw InsufficientData("two-sample KS test needs non-empty samples");
  }
  std::vector<double> x(a.begin(), a.end());
  std::vector<double> y(b.begin(), b.end());
  std::sort(x.begin(), x.end());
  std::sort(y.begin(), y.end());
  const double na = static_cast<double>(x.size());
  const double nb = static_cast<double>(y.size());

  std::size_t i = 0;
  std::size_t j = 0;
  double d = 0.0;
  while (i < x.size() && j < y.size()) {
    const double v = std::min(x[i], y[j]);
    while (i < x.size() && x[i] == v) ++i;
    while (j < y.size() && y[j] == v) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na -
                             static_cast<double>(j) / nb));
  }
  // Once one sample is exhausted its CDF is 1 and the other only rises.
  if (i < x.size()) d = std::max(d, 1.0 - static_cast<double>(i) / na);
  if (j < y.size()) d = std::max(d, 1.0 - static_cast<double>(j) / nb);

  const double ne = na * nb / (na + nb);
  const double root = std::sqrt(ne);
  KsResult out;
  out.statistic = d;
  out.p_value = d == 0.0 ? 1.0
                         : kolmogorov_survival((root + 0.12 + 0.11 / root) * d);
  return out;
}

std::vector<KsPassRatio> pairwise_ks_ratio(std::span<const double> data,
                                           const KsProtocolConfig& config) {
  if (!(config.alpha > 0.0 && config.alpha < 1.0)) {
    throw ConfigError("alpha must lie in (0, 1)");
  }
  if (config.pairs == 0) throw ConfigError("pairs must be >= 1");
  for (std::size_t s : config.sample_sizes) {
    if (s == 0) throw ConfigError("sample sizes must be >= 1");
    if (2 * s > data.size()) {
      throw InsufficientData("sample size " + std::to_string(s) +
                             " needs 2x" + std::to_string(s) +
                             " observations, have " +
                             std::to_string(data.size()));
    }
  }

  std::vector<KsPassRatio> out;
  for (std::size_t size_index = 0; size_index < config.sample_sizes.size();
       ++size_index) {
    const std::size_t s = config.sample_sizes[size_index];
    const auto slack = static_cast<std::int64_t>(data.size() - 2 * s);
    // Pair p draws from stream (size_index, p): jump once per pair.
    RandomSource cursor = RandomSource::stream(config.seed, size_index, 0);
    std::size_t passed = 0;
    for (std::size_t p = 0; p < config.pairs; ++p) {
      RandomSource rng = cursor;
      cursor.jump();
      // Two non-overlapping windows of s consecutive observations. With
      // offsets x <= y in [0, N - 2s] the windows start at x and y + s, so
      // every disjoint placement is reachable and a shift in time shows up
      // as a rejected pair.
      auto x = rng.uniform_int(0, slack);
      auto y = rng.uniform_int(0, slack);
      if (x > y) std::swap(x, y);
      const auto first = data.subspan(static_cast<std::size_t>(x), s);
      const auto second = data.subspan(static_cast<std::size_t>(y) + s, s);
      const auto result = ks_two_sample(first, second);
      if (result.p_value >= config.alpha) ++passed;
    }
    out.push_back({s, config.pairs,
                   static_cast<double>(passed) /
                       static_cast<double>(config.pairs)});
  }
  return out;
}

}  // namespace bullwhip
