#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "bullwhip/random.hpp"

namespace bullwhip {

// ---------------------------------------------------------------------------
// Demand processes
// ---------------------------------------------------------------------------

namespace demand {

struct Constant {
  double value = 0.0;
};

struct IidUniform {
  double lo = 0.0;
  double hi = 1.0;
};

struct IidNormal {
  double mean = 0.0;
  double sd = 1.0;
};

/// D_t = mu + rho * D_{t-1} + eps_t
struct Ar1 {
  double mu = 0.0;
  double rho = 0.0;
  double sigma_eps = 1.0;
};

/// D_t = mu + rho * D_{t-1} + eps_t - theta * eps_{t-1}
struct Arma11 {
  double mu = 0.0;
  double rho = 0.0;
  double theta = 0.0;
  double sigma_eps = 1.0;
};

}  // namespace demand

using DemandProcessSpec = std::variant<demand::Constant, demand::IidUniform,
                                       demand::IidNormal, demand::Ar1,
                                       demand::Arma11>;

/// Distribution of the AR/ARMA innovations. Only mean zero and the variance
/// are pinned by the model; the shape is a free choice.
enum class Innovation { Normal, Uniform };

struct DemandMoments {
  double mean = 0.0;
  double variance = 0.0;
};

/// Throws ConfigError when the spec violates stationarity or ordering
/// constraints (|rho| < 1, |theta| < 1, sigma >= 0, lo < hi).
void validate(const DemandProcessSpec& spec);

/// Exact stationary mean and variance. Constant specs report variance 0;
/// callers that divide by it must reject that case themselves.
DemandMoments demand_moments(const DemandProcessSpec& spec);

std::string describe(const DemandProcessSpec& spec);

/// Stateful generator for one demand stream.
///
/// AR/ARMA state starts at the stationary mean with a zero previous
/// innovation; use `burn_in` (or a simulation warm-up) to reach the
/// stationary regime.
class DemandProcess {
 public:
  explicit DemandProcess(DemandProcessSpec spec,
                         Innovation innovation = Innovation::Normal);

  double next(RandomSource& rng);
  void burn_in(RandomSource& rng, std::size_t periods);

  const DemandProcessSpec& spec() const { return spec_; }

 private:
  double draw_innovation(RandomSource& rng, double sigma);

  DemandProcessSpec spec_;
  Innovation innovation_;
  double previous_demand_ = 0.0;
  double previous_eps_ = 0.0;
};

// ---------------------------------------------------------------------------
// Lead times
// ---------------------------------------------------------------------------

namespace lead {

struct Deterministic {
  int periods = 1;
};

/// Uniform on {a, ..., b}.
struct DiscreteUniform {
  int a = 1;
  int b = 1;
};

/// probabilities[k - 1] = P(L = k) for k = 1..M, where M is the size of the
/// vector. Trailing zeros are allowed and still fix the bound M.
struct Categorical {
  std::vector<double> probabilities;
};

}  // namespace lead

using LeadTimeDistSpec =
    std::variant<lead::Deterministic, lead::DiscreteUniform, lead::Categorical>;

struct LeadTimeMoments {
  double mean = 0.0;
  double variance = 0.0;
  int bound = 1;       ///< M
  double p_bound = 1;  ///< P(L = M)
};

struct RhoPowerMoments {
  double first = 0.0;   ///< E[rho^L]
  double second = 0.0;  ///< E[rho^{2L}]
};

/// A validated lead-time distribution on {1..M}.
class LeadTimeDist {
 public:
  /// Throws ConfigError on invalid specs (non-positive support, negative or
  /// non-normalised probabilities).
  explicit LeadTimeDist(LeadTimeDistSpec spec);

  int sample(RandomSource& rng) const;

  /// P(L = k); zero outside {1..M}.
  double probability(int k) const;
  int bound() const { return static_cast<int>(pmf_.size()); }
  std::span<const double> pmf() const { return pmf_; }
  bool deterministic() const;

  LeadTimeMoments moments() const;
  RhoPowerMoments rho_power_moments(double rho) const;

  const LeadTimeDistSpec& spec() const { return spec_; }

 private:
  LeadTimeDistSpec spec_;
  std::vector<double> pmf_;  ///< pmf_[k - 1] = P(L = k)
  std::vector<double> cdf_;
};

LeadTimeMoments leadtime_moments(const LeadTimeDistSpec& spec);
RhoPowerMoments rho_power_moments(const LeadTimeDistSpec& spec, double rho);

std::string describe(const LeadTimeDistSpec& spec);

}  // namespace bullwhip
