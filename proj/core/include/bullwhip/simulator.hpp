#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "bullwhip/forecasting.hpp"
#include "bullwhip/stochastic.hpp"

namespace bullwhip {

/// One supply-chain member that places orders with the member above it.
struct EchelonConfig {
  std::string name;
  ForecasterSpec forecaster = forecast::ProductOfMAs{};
  /// Delivery lead times of this member's supplier.
  LeadTimeDistSpec lead_time = lead::Deterministic{1};
  double z = 0.0;
  SigmaMode sigma;
  /// Round orders to whole items. Off by default; the variance algebra
  /// assumes real-valued orders.
  bool round_orders = false;
};

/// A linear chain, customers at the bottom. `echelons` is ordered
/// downstream to upstream; the supplier above the last echelon is not
/// simulated and ships everything it is asked for.
struct ChainConfig {
  DemandProcessSpec demand = demand::Constant{1.0};
  Innovation innovation = Innovation::Normal;
  std::vector<EchelonConfig> echelons;
  std::size_t periods = 200000;  ///< total simulated periods, warm-up included
  std::size_t warmup = 1000;     ///< leading periods excluded from statistics
  std::uint64_t seed = 1;
};

/// Throws ConfigError with a field-level message when the chain cannot run.
void validate(const ChainConfig& config);

/// Smallest warm-up that lets every echelon fill its forecast windows with
/// data produced after the echelon below started following its policy.
std::size_t required_warmup(const ChainConfig& config);

/// Periods of demand-process burn-in run before period 0 so that AR/ARMA
/// demand starts stationary: 10 x max(n, m, M) over the echelons.
std::size_t demand_burn_in(const ChainConfig& config);

struct PipelineOrder {
  double quantity = 0.0;
  std::int64_t placed_at = 0;
  std::int64_t arrives_at = 0;
};

// ---------------------------------------------------------------------------

/// Streaming mean and sample variance (Welford).
class RunningMoments {
 public:
  void add(double x);
  std::size_t count() const { return count_; }
  double mean() const { return mean_; }
  /// Sample variance (n - 1 denominator); 0 for fewer than two values.
  double variance() const;

 private:
  std::size_t count_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
};

struct SeriesMoments {
  double mean = 0.0;
  double variance = 0.0;
};

SeriesMoments series_moments(std::span<const double> series);

struct BmEstimate {
  double bm = 0.0;              ///< (Var q / E q) / (Var D / E D)
  double variance_ratio = 0.0;  ///< Var q / Var D
};

/// Plug-in bullwhip estimate. Throws DegenerateSeries if the demand series
/// has zero variance or either series has zero mean.
BmEstimate estimate_bm(std::span<const double> demand,
                       std::span<const double> orders);
BmEstimate estimate_bm(const SeriesMoments& demand,
                       const SeriesMoments& orders);

/// Var(net stock) / Var(demand). Throws DegenerateSeries for constant
/// demand.
double estimate_nsm(std::span<const double> net_stock,
                    std::span<const double> demand);
double estimate_nsm(const SeriesMoments& net_stock,
                    const SeriesMoments& demand);

// ---------------------------------------------------------------------------

struct EchelonStats {
  std::string name;
  SeriesMoments demand;
  SeriesMoments orders;
  SeriesMoments net_stock;
  /// Undefined (nullopt) when the echelon's demand is degenerate.
  std::optional<double> variance_ratio;
  std::optional<double> bm;
  std::optional<double> nsm;
  /// Var(orders) / Var(customer demand); nullopt for constant customers.
  std::optional<double> customer_ratio;

  /// 95% normal-approximation half-widths across replications (R >= 2).
  std::optional<double> variance_ratio_half_width;
  std::optional<double> bm_half_width;
  std::optional<double> nsm_half_width;
  std::optional<double> customer_ratio_half_width;
};

struct RunResult {
  std::vector<EchelonStats> echelons;
  std::size_t replications = 1;
  std::size_t measured_periods = 0;
};

/// One row per echelon per period.
struct TraceRow {
  std::int64_t period = 0;
  std::size_t echelon = 0;
  double demand = 0.0;
  int lead_time = 0;
  std::optional<double> forecast;
  std::optional<double> target;
  double order = 0.0;
  double arrivals = 0.0;
  double net_stock = 0.0;
  double in_flight = 0.0;
  double cumulative_ordered = 0.0;
  double cumulative_received = 0.0;
};

using TraceSink = std::function<void(const TraceRow&)>;

/// Runs replication 0 of the chain.
///
/// Each period t, echelons from downstream up: book arrivals due at t,
/// update forecasts with data through t-1, sample L_t, set S_t and place
/// q_t (arriving at t + L_t), then meet this period's demand from net stock
/// with full backordering. An echelon's demand is the customer demand for
/// the first echelon and the order of the echelon below otherwise. Until an
/// echelon's forecast is available it passes D_{t-1} through as its order;
/// its first policy order lifts the inventory position to S_t.
RunResult run_chain(const ChainConfig& config, const TraceSink& trace = {});

/// Runs replication `replication` (its own random streams).
RunResult run_replication(const ChainConfig& config, std::size_t replication,
                          const TraceSink& trace = {});

/// Runs replications 0..R-1 on up to `jobs` threads and averages them.
/// The result does not depend on `jobs`.
RunResult replicate(const ChainConfig& config, std::size_t replications,
                    std::size_t jobs = 1);

/// Merge per-replication results in order (mean of each statistic plus
/// 1.96 s / sqrt(R) half-widths).
RunResult aggregate(std::span<const RunResult> runs);

}  // namespace bullwhip
