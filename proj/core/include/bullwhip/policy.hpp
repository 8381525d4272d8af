#pragma once

#include <optional>

namespace bullwhip {

/// Order-up-to target S_t = ltd_forecast + z * sigma.
double order_up_to_level(double ltd_forecast, double z, double sigma);

/// Order placed at the start of period t: q_t = S_t - S_{t-1} + D_{t-1}.
/// Negative values are returns.
double place_order(double target, double previous_target,
                   double previous_demand);

/// Phi(p / (p + h)): the normal CDF evaluated at the critical ratio, as the
/// shortcut is usually printed. The textbook newsvendor factor is the
/// quantile Phi^{-1}(p / (p + h)); callers wanting that pass it as z
/// directly.
/// Throws ConfigError unless p > 0 and h > 0.
double z_from_service(double backorder_cost, double holding_cost);

/// Standard normal CDF.
double normal_cdf(double x);

/// Order-up-to bookkeeping for one echelon.
///
/// The target is kept as its two parts (forecast and safety stock) so that
/// with a constant sigma the safety term cancels exactly and the order
/// series does not depend on z, bit for bit.
class OrderUpToState {
 public:
  explicit OrderUpToState(double z) : z_(z) {}

  struct Decision {
    double target = 0.0;
    double order = 0.0;
  };

  /// Computes S_t and q_t. On the first call there is no S_{t-1}; the order
  /// then raises the inventory position straight to S_t, which the caller
  /// supplies as `inventory_position` (net stock plus pipeline before
  /// ordering).
  Decision decide(double ltd_forecast, double sigma, double previous_demand,
                  double inventory_position);

  bool started() const { return previous_forecast_.has_value(); }
  double z() const { return z_; }
  std::optional<double> previous_target() const;

 private:
  double z_;
  std::optional<double> previous_forecast_;
  double previous_safety_ = 0.0;
};

}  // namespace bullwhip
