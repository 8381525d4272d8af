#include "bullwhip/forecasting.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "bullwhip/errors.hpp"
#include "bullwhip/overloaded.hpp"

namespace bullwhip {

ForecastWindow::ForecastWindow(std::size_t capacity) : buffer_(capacity) {
  if (capacity == 0) throw ConfigError("forecast window capacity must be >= 1");
}

void ForecastWindow::push(double value) {
  if (full()) {
    buffer_[head_] = value;
    head_ = (head_ + 1) % buffer_.size();
  } else {
    buffer_[(head_ + size_) % buffer_.size()] = value;
    ++size_;
  }
}

void ForecastWindow::clear() {
  head_ = 0;
  size_ = 0;
}

double ForecastWindow::at(std::size_t i) const {
  if (i >= size_) throw InsufficientHistory("forecast window index out of range");
  return buffer_[(head_ + i) % buffer_.size()];
}

double ForecastWindow::newest() const {
  if (size_ == 0) throw InsufficientHistory("forecast window is empty");
  return at(size_ - 1);
}

std::vector<double> ForecastWindow::values() const {
  std::vector<double> out;
  out.reserve(size_);
  for (std::size_t i = 0; i < size_; ++i) out.push_back(at(i));
  return out;
}

double ForecastWindow::mean() const {
  if (!full()) {
    std::ostringstream msg;
    msg << "moving average needs " << capacity() << " observations, have "
        << size_;
    throw InsufficientHistory(msg.str());
  }
  return mean_of_last(size_);
}

double ForecastWindow::mean_of_last(std::size_t count) const {
  if (count == 0) throw ConfigError("moving-average length must be >= 1");
  if (count > size_) {
    std::ostringstream msg;
    msg << "moving average needs " << count << " observations, have " << size_;
    throw InsufficientHistory(msg.str());
  }
  double sum = 0.0;
  for (std::size_t i = size_ - count; i < size_; ++i) sum += at(i);
  return sum / static_cast<double>(count);
}

double ForecastWindow::sample_stddev() const {
  if (size_ < 2) {
    throw InsufficientHistory("standard deviation needs at least 2 values");
  }
  const double m = mean_of_last(size_);
  double ss = 0.0;
  for (std::size_t i = 0; i < size_; ++i) {
    const double d = at(i) - m;
    ss += d * d;
  }
  return std::sqrt(ss / static_cast<double>(size_ - 1));
}

// ---------------------------------------------------------------------------

double ma_demand(const ForecastWindow& demands, int n) {
  if (n < 1) throw ConfigError("demand window n must be >= 1");
  return demands.mean_of_last(static_cast<std::size_t>(n));
}

double ma_lead_time(const ForecastWindow& lead_times, int m) {
  if (m < 1) throw ConfigError("lead-time window m must be >= 1");
  return lead_times.mean_of_last(static_cast<std::size_t>(m));
}

double lead_time_demand(std::span<const double> demands_from_placement,
                        int lead_time) {
  if (lead_time < 1) throw ConfigError("lead time must be >= 1");
  if (demands_from_placement.size() < static_cast<std::size_t>(lead_time)) {
    throw InsufficientHistory("lead-time demand not yet realised");
  }
  double sum = 0.0;
  for (int i = 0; i < lead_time; ++i) {
    sum += demands_from_placement[static_cast<std::size_t>(i)];
  }
  return sum;
}

double ltd_ma(const ForecastWindow& realized_ltd, int n) {
  if (n < 1) throw ConfigError("lead-time-demand window n must be >= 1");
  return realized_ltd.mean_of_last(static_cast<std::size_t>(n));
}

double mmse_ar1(double last_demand, double mean, double rho, int horizon) {
  if (horizon < 0) throw ConfigError("forecast horizon must be >= 0");
  const double w = std::pow(rho, horizon + 1);
  return mean * (1.0 - w) + w * last_demand;
}

double ltd_mmse_ar1(double last_demand, int lead_time, double mean,
                    double rho) {
  if (lead_time < 1) throw ConfigError("lead time must be >= 1");
  // sum_{i=0}^{L-1} rho^{i+1} = rho (1 - rho^L) / (1 - rho)
  const double geometric = rho * (1.0 - std::pow(rho, lead_time)) / (1.0 - rho);
  return lead_time * mean + (last_demand - mean) * geometric;
}

double ltd_product(double lead_time_hat, double demand_hat) {
  return lead_time_hat * demand_hat;
}

double forecast_error_sigma(const ForecastWindow& errors) {
  return errors.sample_stddev();
}

// ---------------------------------------------------------------------------

RealizedLeadTimeDemand::RealizedLeadTimeDemand(int bound) : bound_(bound) {
  if (bound < 1) throw ConfigError("lead-time bound M must be >= 1");
}

std::optional<double> RealizedLeadTimeDemand::observe_demand(double demand) {
  demands_.push_back(demand);
  const auto m = static_cast<std::size_t>(bound_);
  if (demands_.size() < m || lead_times_.size() < m) {
    if (demands_.size() > m) demands_.pop_front();
    return std::nullopt;
  }
  // Front entries are D_{t-M} and L_{t-M}.
  const int lead = lead_times_.front();
  double ltd = 0.0;
  for (int i = 0; i < lead; ++i) ltd += demands_[static_cast<std::size_t>(i)];
  demands_.pop_front();
  lead_times_.pop_front();
  return ltd;
}

void RealizedLeadTimeDemand::observe_lead_time(int lead_time) {
  if (lead_time < 1 || lead_time > bound_) {
    std::ostringstream msg;
    msg << "lead time " << lead_time << " outside {1.." << bound_ << "}";
    throw ConfigError(msg.str());
  }
  lead_times_.push_back(lead_time);
}

// ---------------------------------------------------------------------------

void validate(const ForecasterSpec& spec) {
  std::visit(
      overloaded{
          [](const forecast::LtdMovingAverage& f) {
            if (f.n < 1) throw ConfigError("forecaster n must be >= 1");
            if (f.bound < 1) throw ConfigError("forecaster M must be >= 1");
          },
          [](const forecast::MmseAr1& f) {
            if (!(std::abs(f.rho) < 1.0))
              throw ConfigError("MMSE forecaster requires |rho| < 1");
          },
          [](const forecast::MmseArma& f) {
            if (!(std::abs(f.rho) < 1.0))
              throw ConfigError("MMSE forecaster requires |rho| < 1");
            if (!(std::abs(f.theta) < 1.0))
              throw ConfigError("MMSE forecaster requires |theta| < 1");
          },
          [](const forecast::ProductOfMAs& f) {
            if (f.m < 1) throw ConfigError("forecaster m must be >= 1");
            if (f.n < 1) throw ConfigError("forecaster n must be >= 1");
          },
      },
      spec);
}

std::string describe(const ForecasterSpec& spec) {
  std::ostringstream out;
  std::visit(overloaded{
                 [&](const forecast::LtdMovingAverage& f) {
                   out << "ltd_moving_average(n=" << f.n << ", M=" << f.bound
                       << ")";
                 },
                 [&](const forecast::MmseAr1& f) {
                   out << "mmse_ar1(mean=" << f.mean << ", rho=" << f.rho
                       << ")";
                 },
                 [&](const forecast::MmseArma& f) {
                   out << "mmse_arma(mean=" << f.mean << ", rho=" << f.rho
                       << ", theta=" << f.theta << ")";
                 },
                 [&](const forecast::ProductOfMAs& f) {
                   out << "product_of_mas(m=" << f.m << ", n=" << f.n << ")";
                 },
             },
             spec);
  return out.str();
}

namespace {

class LtdMovingAverageForecaster final : public Forecaster {
 public:
  explicit LtdMovingAverageForecaster(const forecast::LtdMovingAverage& spec)
      : spec_(spec),
        realized_(spec.bound),
        window_(static_cast<std::size_t>(spec.n)) {}

  void observe_demand(double demand) override {
    if (auto ltd = realized_.observe_demand(demand)) window_.push(*ltd);
  }
  void observe_lead_time(int lead_time) override {
    realized_.observe_lead_time(lead_time);
  }
  std::optional<double> forecast(int) const override {
    if (!window_.full()) return std::nullopt;
    return ltd_ma(window_, spec_.n);
  }
  int history_needed() const override { return spec_.bound + spec_.n - 1; }

 private:
  forecast::LtdMovingAverage spec_;
  RealizedLeadTimeDemand realized_;
  ForecastWindow window_;
};

class MmseAr1Forecaster final : public Forecaster {
 public:
  explicit MmseAr1Forecaster(const forecast::MmseAr1& spec) : spec_(spec) {}

  void observe_demand(double demand) override { last_demand_ = demand; }
  void observe_lead_time(int) override {}
  std::optional<double> forecast(int lead_time) const override {
    if (!last_demand_) return std::nullopt;
    return ltd_mmse_ar1(*last_demand_, lead_time, spec_.mean, spec_.rho);
  }
  int history_needed() const override { return 1; }

 private:
  forecast::MmseAr1 spec_;
  std::optional<double> last_demand_;
};

/// One-step predictor D^_t = mu + rho D_{t-1} - theta e_{t-1}, with the
/// innovation recovered as e_{t-1} = D_{t-1} - D^_{t-1}. Starting from
/// e = 0 the error in the recovered innovations decays like theta^t.
class MmseArmaForecaster final : public Forecaster {
 public:
  explicit MmseArmaForecaster(const forecast::MmseArma& spec) : spec_(spec) {}

  void observe_demand(double demand) override {
    const double innovation = one_step_ ? demand - *one_step_ : 0.0;
    const double mu = spec_.mean * (1.0 - spec_.rho);
    one_step_ = mu + spec_.rho * demand - spec_.theta * innovation;
  }
  void observe_lead_time(int) override {}
  std::optional<double> forecast(int lead_time) const override {
    if (!one_step_) return std::nullopt;
    if (lead_time < 1) throw ConfigError("lead time must be >= 1");
    // D^_{t+i} = mean + rho^i (D^_t - mean)
    const double sum_powers =
        (1.0 - std::pow(spec_.rho, lead_time)) / (1.0 - spec_.rho);
    return lead_time * spec_.mean + (*one_step_ - spec_.mean) * sum_powers;
  }
  int history_needed() const override { return 1; }

 private:
  forecast::MmseArma spec_;
  std::optional<double> one_step_;
};

class ProductOfMAsForecaster final : public Forecaster {
 public:
  explicit ProductOfMAsForecaster(const forecast::ProductOfMAs& spec)
      : spec_(spec),
        demands_(static_cast<std::size_t>(spec.n)),
        lead_times_(static_cast<std::size_t>(spec.m)) {}

  void observe_demand(double demand) override { demands_.push(demand); }
  void observe_lead_time(int lead_time) override {
    lead_times_.push(static_cast<double>(lead_time));
  }
  std::optional<double> forecast(int) const override {
    if (!demands_.full() || !lead_times_.full()) return std::nullopt;
    return ltd_product(ma_lead_time(lead_times_, spec_.m),
                       ma_demand(demands_, spec_.n));
  }
  int history_needed() const override { return std::max(spec_.m, spec_.n); }

 private:
  forecast::ProductOfMAs spec_;
  ForecastWindow demands_;
  ForecastWindow lead_times_;
};

}  // namespace

std::unique_ptr<Forecaster> make_forecaster(const ForecasterSpec& spec) {
  validate(spec);
  return std::visit(
      overloaded{
          [](const forecast::LtdMovingAverage& f)
              -> std::unique_ptr<Forecaster> {
            return std::make_unique<LtdMovingAverageForecaster>(f);
          },
          [](const forecast::MmseAr1& f) -> std::unique_ptr<Forecaster> {
            return std::make_unique<MmseAr1Forecaster>(f);
          },
          [](const forecast::MmseArma& f) -> std::unique_ptr<Forecaster> {
            return std::make_unique<MmseArmaForecaster>(f);
          },
          [](const forecast::ProductOfMAs& f) -> std::unique_ptr<Forecaster> {
            return std::make_unique<ProductOfMAsForecaster>(f);
          },
      },
      spec);
}

// ---------------------------------------------------------------------------

ForecastErrorSigma::ForecastErrorSigma(SigmaMode mode)
    : mode_(mode), errors_(std::max<std::size_t>(mode.window, 2)) {
  if (mode_.kind == SigmaMode::Kind::Constant && !(mode_.value >= 0.0)) {
    throw ConfigError("constant sigma must be >= 0");
  }
  if (mode_.kind == SigmaMode::Kind::Empirical && mode_.window < 2) {
    throw ConfigError("empirical sigma window must be >= 2");
  }
}

void ForecastErrorSigma::record_error(double error) {
  if (mode_.kind == SigmaMode::Kind::Empirical) errors_.push(error);
}

double ForecastErrorSigma::sigma() const {
  if (mode_.kind == SigmaMode::Kind::Constant) return mode_.value;
  return forecast_error_sigma(errors_);
}

bool ForecastErrorSigma::ready() const {
  return mode_.kind == SigmaMode::Kind::Constant || errors_.size() >= 2;
}

}  // namespace bullwhip
