#pragma once

#include <cstddef>
#include <deque>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace bullwhip {

/// Fixed-capacity FIFO of the most recent observations.
///
/// Averages are only defined once the window is full; a partially filled
/// window throws InsufficientHistory instead of averaging fewer points.
class ForecastWindow {
 public:
  explicit ForecastWindow(std::size_t capacity);

  void push(double value);
  void clear();

  std::size_t capacity() const { return buffer_.size(); }
  std::size_t size() const { return size_; }
  bool full() const { return size_ == buffer_.size(); }

  /// i-th stored value, 0 = oldest.
  double at(std::size_t i) const;
  double newest() const;
  std::vector<double> values() const;

  /// Mean of all stored values; the window must be full.
  double mean() const;
  /// Mean of the `count` newest values; needs at least `count` stored.
  double mean_of_last(std::size_t count) const;
  /// Sample (n - 1) standard deviation of the stored values; needs >= 2.
  double sample_stddev() const;

 private:
  std::vector<double> buffer_;
  std::size_t head_ = 0;  // index of the oldest value
  std::size_t size_ = 0;
};

/// Moving average of the last n demands D_{t-1}..D_{t-n}.
double ma_demand(const ForecastWindow& demands, int n);

/// Moving average of the last m observed lead times.
double ma_lead_time(const ForecastWindow& lead_times, int m);

/// Lead-time demand of an order: the sum of the first `lead_time` demands of
/// `demands_from_placement` (D_s, D_{s+1}, ...).
double lead_time_demand(std::span<const double> demands_from_placement,
                        int lead_time);

/// Moving average of the n newest fully realised lead-time demands. The
/// window is expected to be fed by RealizedLeadTimeDemand, which lags the
/// values by the lead-time bound M.
double ltd_ma(const ForecastWindow& realized_ltd, int n);

/// MMSE forecast of D_{t+i} from D_{t-1} under AR(1) demand with stationary
/// mean `mean`.
double mmse_ar1(double last_demand, double mean, double rho, int horizon);

/// Sum of mmse_ar1 over horizons 0..lead_time-1 in closed form. Needs the
/// current order's lead time, which a real retailer would not know.
double ltd_mmse_ar1(double last_demand, int lead_time, double mean,
                    double rho);

/// Lead-time demand as (forecast lead time) x (forecast per-period demand).
double ltd_product(double lead_time_hat, double demand_hat);

/// Sample standard deviation of past lead-time-demand forecast errors.
double forecast_error_sigma(const ForecastWindow& errors);

/// Tracks demands and per-order lead times and reports D^L_{t-M}, the
/// lead-time demand of the order placed M periods ago, as soon as period
/// t-1 has been observed. Because every lead time is at most M that value
/// is always complete.
class RealizedLeadTimeDemand {
 public:
  explicit RealizedLeadTimeDemand(int bound);

  /// Record D_{t-1}. Returns D^L_{t-M} once M demands and M lead times are
  /// known.
  std::optional<double> observe_demand(double demand);
  /// Record L_t of the order placed this period.
  void observe_lead_time(int lead_time);

  int bound() const { return bound_; }

 private:
  int bound_;
  std::deque<double> demands_;
  std::deque<int> lead_times_;
};

// ---------------------------------------------------------------------------

namespace forecast {

/// Moving average of the n newest realised lead-time demands, lagged by M.
struct LtdMovingAverage {
  int n = 1;
  int bound = 1;
};

/// Sum of MMSE AR(1) forecasts over the order's own lead time.
struct MmseAr1 {
  double mean = 0.0;
  double rho = 0.0;
};

/// Sum of MMSE ARMA(1,1) forecasts over the order's own lead time.
struct MmseArma {
  double mean = 0.0;
  double rho = 0.0;
  double theta = 0.0;
};

/// (moving average of m lead times) x (moving average of n demands).
struct ProductOfMAs {
  int m = 1;
  int n = 1;
};

}  // namespace forecast

using ForecasterSpec =
    std::variant<forecast::LtdMovingAverage, forecast::MmseAr1,
                 forecast::MmseArma, forecast::ProductOfMAs>;

/// Throws ConfigError for n < 1, m < 1, M < 1, |rho| >= 1 or |theta| >= 1.
void validate(const ForecasterSpec& spec);
std::string describe(const ForecasterSpec& spec);

/// Stateful lead-time-demand predictor for one echelon.
///
/// Per period t the owner calls observe_demand(D_{t-1}) (from t = 1 on),
/// then forecast(L_t), then observe_lead_time(L_t).
class Forecaster {
 public:
  virtual ~Forecaster() = default;

  virtual void observe_demand(double demand) = 0;
  virtual void observe_lead_time(int lead_time) = 0;
  /// Forecast of the lead-time demand of the order placed now, or nullopt
  /// while the history is too short. `lead_time` is only consulted by the
  /// MMSE forecasters.
  virtual std::optional<double> forecast(int lead_time) const = 0;
  /// Number of periods after which forecast() is guaranteed to be available.
  virtual int history_needed() const = 0;
};

std::unique_ptr<Forecaster> make_forecaster(const ForecasterSpec& spec);

// ---------------------------------------------------------------------------

/// How the safety-stock standard deviation is obtained.
struct SigmaMode {
  enum class Kind { Constant, Empirical };
  Kind kind = Kind::Constant;
  double value = 0.0;         ///< used in Constant mode
  std::size_t window = 1000;  ///< error-window capacity in Empirical mode
};

/// sigma-hat for the order-up-to level. Constant mode returns the configured
/// value; empirical mode returns the sample standard deviation of the most
/// recent realised forecast errors.
class ForecastErrorSigma {
 public:
  explicit ForecastErrorSigma(SigmaMode mode);

  void record_error(double error);
  /// Throws InsufficientHistory in empirical mode with fewer than 2 errors.
  double sigma() const;
  bool ready() const;
  const SigmaMode& mode() const { return mode_; }

 private:
  SigmaMode mode_;
  ForecastWindow errors_;
};

}  // namespace bullwhip
