#include "bullwhip/policy.hpp"

#include <cmath>

#include "bullwhip/errors.hpp"

namespace bullwhip {

double order_up_to_level(double ltd_forecast, double z, double sigma) {
  if (!(sigma >= 0.0)) throw ConfigError("sigma must be >= 0");
  return ltd_forecast + z * sigma;
}

double place_order(double target, double previous_target,
                   double previous_demand) {
  return target - previous_target + previous_demand;
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

double z_from_service(double backorder_cost, double holding_cost) {
  if (!(backorder_cost > 0.0) || !(holding_cost > 0.0)) {
    throw ConfigError("backorder and holding costs must be positive");
  }
  return normal_cdf(backorder_cost / (backorder_cost + holding_cost));
}

OrderUpToState::Decision OrderUpToState::decide(double ltd_forecast,
                                                double sigma,
                                                double previous_demand,
                                                double inventory_position) {
  const double safety = z_ * sigma;
  Decision d;
  d.target = order_up_to_level(ltd_forecast, z_, sigma);
  if (previous_forecast_) {
    d.order = (ltd_forecast - *previous_forecast_) +
              (safety - previous_safety_) + previous_demand;
  } else {
    d.order = d.target - inventory_position;
  }
  previous_forecast_ = ltd_forecast;
  previous_safety_ = safety;
  return d;
}

std::optional<double> OrderUpToState::previous_target() const {
  if (!previous_forecast_) return std::nullopt;
  return *previous_forecast_ + previous_safety_;
}

}  // namespace bullwhip
