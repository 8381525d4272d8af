#include "bullwhip/analytic.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <locale>
#include <sstream>

#include "bullwhip/errors.hpp"

namespace bullwhip {
namespace {

void require_positive_variance(const DemandMoments& demand) {
  if (!(demand.variance > 0.0)) {
    throw ConfigError("demand variance must be > 0 for a variance ratio");
  }
}

/// 2 mu_D^2 sigma_L^2 / sigma_D^2, the lead-time-uncertainty term shared by
/// every stochastic lead-time model.
double lead_time_term(double lead_variance, const DemandMoments& demand) {
  return 2.0 * demand.mean * demand.mean * lead_variance / demand.variance;
}

}  // namespace

double bm_deterministic_ma(int lead_time, int n) {
  if (lead_time < 1) throw ConfigError("lead time L must be >= 1");
  if (n < 1) throw ConfigError("window n must be >= 1");
  const double nn = n;
  if (lead_time < n) return 1.0 + 2.0 / nn + 2.0 * lead_time / (nn * nn);
  return 1.0 + 4.0 / nn;
}

double bm_ltd_ma_stochastic(const LeadTimeMoments& lead, int n,
                            const DemandMoments& demand) {
  if (n < 1) throw ConfigError("window n must be >= 1");
  if (n < lead.bound) {
    std::ostringstream msg;
    msg << "closed form requires n >= M (n = " << n << ", M = " << lead.bound
        << ")";
    throw NotSupported(msg.str());
  }
  require_positive_variance(demand);
  const double nn = n;
  return 1.0 + 2.0 * lead.p_bound / nn + 2.0 * lead.mean / (nn * nn) +
         lead_time_term(lead.variance, demand) / (nn * nn);
}

double bm_ltd_ma_stochastic(const LeadTimeDist& lead, int n,
                            const DemandMoments& demand) {
  return bm_ltd_ma_stochastic(lead.moments(), n, demand);
}

double bm_mmse_ar1(const LeadTimeDist& lead, double rho,
                  const DemandMoments& demand) {
  if (!(std::abs(rho) < 1.0)) throw ConfigError("requires |rho| < 1");
  require_positive_variance(demand);
  const auto [e1, e2] = lead.rho_power_moments(rho);
  const double r2 = rho * rho;
  const double numerator = (1.0 - r2) * (1.0 - 2.0 * rho * e1) +
                           2.0 * r2 * e2 - 2.0 * r2 * rho * e1 * e1;
  const double one_minus = 1.0 - rho;
  return numerator / (one_minus * one_minus) +
         lead_time_term(lead.moments().variance, demand);
}

double bm_mmse_arma(const LeadTimeDist& lead, double rho, double theta,
                   const DemandMoments& demand) {
  if (!(std::abs(rho) < 1.0)) throw ConfigError("requires |rho| < 1");
  if (!(std::abs(theta) < 1.0)) throw ConfigError("requires |theta| < 1");
  require_positive_variance(demand);
  const auto [e1, e2] = lead.rho_power_moments(rho);
  const double gap = rho - theta;
  const double numerator =
      (1.0 - rho * rho) * (1.0 - theta) *
          (1.0 - theta + 2.0 * (theta - rho) * e1) +
      2.0 * gap * gap * (e2 - rho * e1 * e1);
  const double one_minus = 1.0 - rho;
  const double denominator =
      one_minus * one_minus * (1.0 + theta * theta - 2.0 * rho * theta);
  return numerator / denominator +
         lead_time_term(lead.moments().variance, demand);
}

double bm_product_ma(int m, int n, double lead_mean, double lead_variance,
                         const DemandMoments& demand) {
  if (m < 1) throw ConfigError("lead-time window m must be >= 1");
  if (n < 1) throw ConfigError("demand window n must be >= 1");
  if (!(lead_variance >= 0.0)) throw ConfigError("lead-time variance < 0");
  require_positive_variance(demand);
  const double mm = m;
  const double nn = n;
  return 2.0 * lead_variance * (mm + nn - 1.0) / (mm * mm * nn * nn) +
         lead_time_term(lead_variance, demand) / (mm * mm) +
         2.0 * lead_mean * lead_mean / (nn * nn) + 2.0 * lead_mean / nn + 1.0;
}

// ---------------------------------------------------------------------------

std::string format_truncated(double value, int decimals) {
  const double scale = std::pow(10.0, decimals);
  // The small nudge keeps values such as 1.05 (stored as 1.0499999...) from
  // dropping a digit.
  const double magnitude = std::floor(std::abs(value) * scale + 1e-7) / scale;
  std::ostringstream out;
  out.imbue(std::locale::classic());
  out << std::fixed << std::setprecision(decimals)
      << (value < 0 ? -magnitude : magnitude);
  return out.str();
}

std::string format_significant_truncated(double value, int digits) {
  if (value == 0.0) return format_truncated(0.0, digits - 1);
  const int integer_digits =
      static_cast<int>(std::floor(std::log10(std::abs(value)))) + 1;
  return format_truncated(value, std::max(0, digits - integer_digits));
}

std::string BullwhipTable::formatted(std::size_t row,
                                     std::size_t column) const {
  const double v = values.at(row).at(column);
  return format == Format::Truncate3 ? format_truncated(v, 3)
                                     : format_significant_truncated(v, 5);
}

std::string BullwhipTable::to_csv() const {
  std::ostringstream out;
  out << corner;
  for (const auto& label : column_labels) out << ',' << label;
  out << '\n';
  for (std::size_t r = 0; r < row_keys.size(); ++r) {
    out << row_keys[r];
    for (std::size_t c = 0; c < column_labels.size(); ++c) {
      out << ',' << formatted(r, c);
    }
    out << '\n';
  }
  return out.str();
}

namespace {

BullwhipTable ltd_ma_table(std::string name, int bound, int first_n, int last_n,
                           const LeadTimeMoments& with_mass,
                           const LeadTimeMoments& without_mass) {
  // sigma_D / mu_D = 0.5
  const DemandMoments demand{1.0, 0.25};
  BullwhipTable table;
  table.name = std::move(name);
  table.title = "Bullwhip measure vs n, M = " + std::to_string(bound) +
                ", sigma_D/mu_D = 0.5";
  table.corner = "n";
  table.column_labels = {"p_M>0", "p_M=0"};
  table.format = BullwhipTable::Format::Truncate3;
  for (int n = first_n; n <= last_n; ++n) {
    table.row_keys.push_back(n);
    table.values.push_back({bm_ltd_ma_stochastic(with_mass, n, demand),
                            bm_ltd_ma_stochastic(without_mass, n, demand)});
  }
  return table;
}

}  // namespace

BullwhipTable ltd_ma_table_m3() {
  const LeadTimeDist with_mass(lead::DiscreteUniform{1, 3});
  const LeadTimeDist without_mass(lead::Categorical{{0.5, 0.5, 0.0}});
  return ltd_ma_table("ltd-ma-m3", 3, 3, 15, with_mass.moments(),
                      without_mass.moments());
}

BullwhipTable ltd_ma_table_m7() {
  const LeadTimeDist with_mass(lead::DiscreteUniform{1, 7});
  // The p_M = 0 column uses sigma_L^2 = 3.916, not the exact 35/12 of
  // uniform{1..6}; the reference values only come out with 3.916.
  const LeadTimeMoments without_mass{3.5, 3.916, 7, 0.0};
  return ltd_ma_table("ltd-ma-m7", 7, 7, 18, with_mass.moments(), without_mass);
}

BullwhipTable product_ma_table() {
  const LeadTimeMoments lead = LeadTimeDist(lead::DiscreteUniform{1, 7}).moments();
  const DemandMoments demand = demand_moments(demand::IidUniform{4500, 5500});
  const std::vector<int> ms = {1, 3, 6, 10, 20};
  const std::vector<int> ns = {1, 2, 6, 10, 20};

  BullwhipTable table;
  table.name = "product-ma";
  table.title = "Bullwhip measure, m x n moving averages, uniform{1..7} lead "
                "times, U(4500, 5500) demand";
  table.corner = "m\\n";
  for (int n : ns) table.column_labels.push_back(std::to_string(n));
  table.format = BullwhipTable::Format::Significant5;
  for (int m : ms) {
    table.row_keys.push_back(m);
    std::vector<double> row;
    for (int n : ns) {
      row.push_back(bm_product_ma(m, n, lead.mean, lead.variance, demand));
    }
    table.values.push_back(std::move(row));
  }
  return table;
}

BullwhipTable reference_table(const std::string& name) {
  for (auto& table : reference_tables()) {
    if (table.name == name) return std::move(table);
  }
  throw ConfigError("unknown table '" + name +
                    "' (available: ltd-ma-m3, ltd-ma-m7, product-ma)");
}

std::vector<BullwhipTable> reference_tables() {
  return {ltd_ma_table_m3(), ltd_ma_table_m7(), product_ma_table()};
}

}  // namespace bullwhip
