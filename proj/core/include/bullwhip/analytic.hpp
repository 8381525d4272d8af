#pragma once

#include <string>
#include <vector>

#include "bullwhip/stochastic.hpp"

namespace bullwhip {

/// Variance ratio Var(q)/Var(D) with a deterministic lead time L and a
/// moving-average lead-time-demand forecast of length n:
///   1 + 2/n + 2L/n^2   if L < n
///   1 + 4/n            if L >= n
double bm_deterministic_ma(int lead_time, int n);

/// Variance ratio for i.i.d. demand and i.i.d. lead times bounded by M with
/// a moving average of the n newest realised lead-time demands (n >= M):
///   1 + 2 p_M / n + 2 mu_L / n^2 + 2 mu_D^2 sigma_L^2 / (sigma_D^2 n^2)
/// Throws NotSupported when n < M (no closed form is available there) and
/// ConfigError when sigma_D^2 <= 0.
double bm_ltd_ma_stochastic(const LeadTimeDist& lead, int n,
                            const DemandMoments& demand);
/// Same, from lead-time moments directly (mean, variance, M, p_M).
double bm_ltd_ma_stochastic(const LeadTimeMoments& lead, int n,
                            const DemandMoments& demand);

/// AR(1) demand with MMSE forecasts summed over the order's own lead time.
double bm_mmse_ar1(const LeadTimeDist& lead, double rho,
                  const DemandMoments& demand);

/// ARMA(1,1) demand with MMSE forecasts summed over the order's own lead
/// time. Reduces to bm_mmse_ar1 at theta = 0.
double bm_mmse_arma(const LeadTimeDist& lead, double rho, double theta,
                   const DemandMoments& demand);

/// Separate moving averages of lead times (length m) and demands (length n),
/// multiplied into a lead-time-demand forecast:
///   2 s_L^2 (m+n-1)/(m^2 n^2) + 2 mu_D^2 s_L^2/(s_D^2 m^2)
///     + 2 mu_L^2/n^2 + 2 mu_L/n + 1
double bm_product_ma(int m, int n, double lead_mean, double lead_variance,
                         const DemandMoments& demand);

// ---------------------------------------------------------------------------

/// A grid of closed-form values with the print rule used for comparison
/// against printed reference values.
struct BullwhipTable {
  enum class Format {
    Truncate3,     ///< three decimals, truncated toward zero
    Significant5,  ///< five significant digits, truncated toward zero
  };

  std::string name;
  std::string title;
  std::string corner;  ///< header of the row-label column
  std::vector<std::string> column_labels;
  std::vector<int> row_keys;
  std::vector<std::vector<double>> values;  ///< values[row][column]
  Format format = Format::Truncate3;

  std::string formatted(std::size_t row, std::size_t column) const;
  /// One header row, '.' decimal separator, '\n' line ends.
  std::string to_csv() const;
};

/// Measure vs n for M = 3, sigma_D/mu_D = 0.5; columns: uniform{1,2,3} and
/// uniform{1,2} embedded with M = 3 (p_M = 0).
BullwhipTable ltd_ma_table_m3();
/// Measure vs n for M = 7, sigma_D/mu_D = 0.5; columns: uniform{1..7} and
/// the p_M = 0 variant with mu_L = 3.5, sigma_L^2 = 3.916.
BullwhipTable ltd_ma_table_m7();
/// Lead-time x demand moving-average grid, m in {1,3,6,10,20} by
/// n in {1,2,6,10,20}, for uniform{1..7} lead times and U(4500, 5500) demand.
BullwhipTable product_ma_table();

/// Table by name: ltd-ma-m3, ltd-ma-m7 or product-ma.
/// Throws ConfigError for other names.
BullwhipTable reference_table(const std::string& name);
std::vector<BullwhipTable> reference_tables();

/// Truncate toward zero at `decimals` places and print with exactly that
/// many decimals.
std::string format_truncated(double value, int decimals);
/// Truncate toward zero keeping `digits` significant digits.
std::string format_significant_truncated(double value, int digits);

}  // namespace bullwhip
