#pragma once

#include <chrono>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace bullwhip {

/// One row of an order log.
struct OrderRecord {
  std::chrono::sys_days order_date;
  std::chrono::sys_days delivery_date;
  double quantity = 0.0;

  /// Whole days from order to delivery; same-day delivery is 0.
  int lead_time_days() const {
    return static_cast<int>((delivery_date - order_date).count());
  }
};

/// Parses "YYYY-MM-DD". Throws ParseError on anything else.
std::chrono::sys_days parse_iso_date(const std::string& text);
std::string format_iso_date(std::chrono::sys_days day);

/// Reads a CSV order log with header `order_date,delivery_date,quantity`.
/// Throws ParseError naming every malformed line (by 1-based line number)
/// and for an empty log.
std::vector<OrderRecord> load_orders(std::istream& in);
std::vector<OrderRecord> load_orders_file(const std::string& path);

struct DailyLeadTime {
  std::chrono::sys_days day;
  double mean_lead_time = 0.0;
  std::size_t orders = 0;
};

/// Mean lead time per order date, sorted by date. Days without orders are
/// absent rather than imputed.
std::vector<DailyLeadTime> daily_average_lead_time(
    std::span<const OrderRecord> records);

std::vector<double> lead_times(std::span<const OrderRecord> records);

// ---------------------------------------------------------------------------

struct Correlogram {
  /// coefficients[k] for lag k = 0..max_lag; coefficients[0] == 1 for the
  /// ACF and is unused (0) for the PACF.
  std::vector<double> coefficients;
  /// 1.96 / sqrt(N), the approximate 95% white-noise band.
  double band = 0.0;

  /// Fraction of lags 1..max_lag with |r_k| <= band.
  double fraction_inside_band() const;
};

/// Sample autocorrelation
///   r_k = sum (x_t - m)(x_{t+k} - m) / sum (x_t - m)^2.
/// Requires N > max_lag + 1; throws ConstantSeries for zero variance.
Correlogram acf(std::span<const double> series, int max_lag);

/// Partial autocorrelation by the Durbin-Levinson recursion on the sample
/// ACF. Throws SingularRecursion if a step's prediction-error variance
/// vanishes.
Correlogram pacf(std::span<const double> series, int max_lag);

// ---------------------------------------------------------------------------

struct KsResult {
  double statistic = 0.0;  ///< sup |F_a - F_b|
  double p_value = 1.0;
};

/// Survival function of the Kolmogorov distribution,
/// Q(x) = 2 sum_{k>=1} (-1)^{k-1} exp(-2 k^2 x^2).
double kolmogorov_survival(double x);

/// Two-sample Kolmogorov-Smirnov test.
///
/// The statistic uses right-continuous empirical CDFs compared at every
/// point of the pooled support, so tied values are stepped over together.
/// The p-value is asymptotic, Q((sqrt(ne) + 0.12 + 0.11 / sqrt(ne)) D) with
/// ne = n_a n_b / (n_a + n_b); with ties it is conservative.
/// Throws InsufficientData if either sample is empty.
KsResult ks_two_sample(std::span<const double> a, std::span<const double> b);

struct KsProtocolConfig {
  std::vector<std::size_t> sample_sizes = {50, 100, 200, 500};
  std::size_t pairs = 100;
  double alpha = 0.05;
  std::uint64_t seed = 1;
};

struct KsPassRatio {
  std::size_t sample_size = 0;
  std::size_t pairs = 0;
  double pass_ratio = 0.0;  ///< fraction of pairs with p >= alpha
};

/// For each sample size s, draws `pairs` random pairs of disjoint windows of
/// s consecutive observations, runs the two-sample KS test on each, and
/// reports the fraction not rejected at level alpha. `data` must be in time
/// order; windows are what make a drift or level shift detectable.
/// Throws InsufficientData if 2s exceeds the data size and ConfigError for
/// alpha outside (0, 1) or zero pairs.
std::vector<KsPassRatio> pairwise_ks_ratio(std::span<const double> data,
                                           const KsProtocolConfig& config);

}  // namespace bullwhip
