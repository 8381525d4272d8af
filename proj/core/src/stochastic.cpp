#include "bullwhip/stochastic.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "bullwhip/errors.hpp"
#include "bullwhip/overloaded.hpp"

namespace bullwhip {
namespace {

void require(bool ok, const std::string& message) {
  if (!ok) throw ConfigError(message);
}

}  // namespace

void validate(const DemandProcessSpec& spec) {
  std::visit(
      overloaded{
          [](const demand::Constant& c) {
            require(std::isfinite(c.value), "constant demand must be finite");
          },
          [](const demand::IidUniform& u) {
            require(std::isfinite(u.lo) && std::isfinite(u.hi) && u.lo < u.hi,
                    "uniform demand requires lo < hi");
          },
          [](const demand::IidNormal& n) {
            require(std::isfinite(n.mean) && n.sd >= 0.0,
                    "normal demand requires sd >= 0");
          },
          [](const demand::Ar1& a) {
            require(std::abs(a.rho) < 1.0, "AR(1) demand requires |rho| < 1");
            require(a.sigma_eps >= 0.0, "AR(1) demand requires sigma_eps >= 0");
          },
          [](const demand::Arma11& a) {
            require(std::abs(a.rho) < 1.0,
                    "ARMA(1,1) demand requires |rho| < 1");
            require(std::abs(a.theta) < 1.0,
                    "ARMA(1,1) demand requires |theta| < 1");
            require(a.sigma_eps >= 0.0,
                    "ARMA(1,1) demand requires sigma_eps >= 0");
          },
      },
      spec);
}

DemandMoments demand_moments(const DemandProcessSpec& spec) {
  validate(spec);
  return std::visit(
      overloaded{
          [](const demand::Constant& c) { return DemandMoments{c.value, 0.0}; },
          [](const demand::IidUniform& u) {
            const double w = u.hi - u.lo;
            return DemandMoments{0.5 * (u.lo + u.hi), w * w / 12.0};
          },
          [](const demand::IidNormal& n) {
            return DemandMoments{n.mean, n.sd * n.sd};
          },
          [](const demand::Ar1& a) {
            const double s2 = a.sigma_eps * a.sigma_eps;
            return DemandMoments{a.mu / (1.0 - a.rho),
                                 s2 / (1.0 - a.rho * a.rho)};
          },
          [](const demand::Arma11& a) {
            const double s2 = a.sigma_eps * a.sigma_eps;
            return DemandMoments{
                a.mu / (1.0 - a.rho),
                s2 * (1.0 + a.theta * a.theta - 2.0 * a.rho * a.theta) /
                    (1.0 - a.rho * a.rho)};
          },
      },
      spec);
}

std::string describe(const DemandProcessSpec& spec) {
  std::ostringstream out;
  std::visit(overloaded{
                 [&](const demand::Constant& c) {
                   out << "constant(" << c.value << ")";
                 },
                 [&](const demand::IidUniform& u) {
                   out << "iid_uniform(" << u.lo << ", " << u.hi << ")";
                 },
                 [&](const demand::IidNormal& n) {
                   out << "iid_normal(" << n.mean << ", " << n.sd << ")";
                 },
                 [&](const demand::Ar1& a) {
                   out << "ar1(mu=" << a.mu << ", rho=" << a.rho
                       << ", sigma=" << a.sigma_eps << ")";
                 },
                 [&](const demand::Arma11& a) {
                   out << "arma11(mu=" << a.mu << ", rho=" << a.rho
                       << ", theta=" << a.theta << ", sigma=" << a.sigma_eps
                       << ")";
                 },
             },
             spec);
  return out.str();
}

DemandProcess::DemandProcess(DemandProcessSpec spec, Innovation innovation)
    : spec_(std::move(spec)), innovation_(innovation) {
  validate(spec_);
  previous_demand_ = demand_moments(spec_).mean;
}

double DemandProcess::draw_innovation(RandomSource& rng, double sigma) {
  if (sigma == 0.0) return 0.0;
  if (innovation_ == Innovation::Uniform) {
    const double half_width = sigma * std::sqrt(3.0);
    return rng.uniform(-half_width, half_width);
  }
  return sigma * rng.normal();
}

double DemandProcess::next(RandomSource& rng) {
  const double d = std::visit(
      overloaded{
          [](const demand::Constant& c) { return c.value; },
          [&](const demand::IidUniform& u) { return rng.uniform(u.lo, u.hi); },
          [&](const demand::IidNormal& n) {
            return n.sd == 0.0 ? n.mean : n.mean + n.sd * rng.normal();
          },
          [&](const demand::Ar1& a) {
            const double eps = draw_innovation(rng, a.sigma_eps);
            return a.mu + a.rho * previous_demand_ + eps;
          },
          [&](const demand::Arma11& a) {
            const double eps = draw_innovation(rng, a.sigma_eps);
            const double value = a.mu + a.rho * previous_demand_ + eps -
                                 a.theta * previous_eps_;
            previous_eps_ = eps;
            return value;
          },
      },
      spec_);
  previous_demand_ = d;
  return d;
}

void DemandProcess::burn_in(RandomSource& rng, std::size_t periods) {
  for (std::size_t i = 0; i < periods; ++i) next(rng);
}

// ---------------------------------------------------------------------------

namespace {

std::vector<double> build_pmf(const LeadTimeDistSpec& spec) {
  return std::visit(
      overloaded{
          [](const lead::Deterministic& d) {
            require(d.periods >= 1, "deterministic lead time must be >= 1");
            std::vector<double> pmf(static_cast<std::size_t>(d.periods), 0.0);
            pmf.back() = 1.0;
            return pmf;
          },
          [](const lead::DiscreteUniform& u) {
            require(u.a >= 1 && u.a <= u.b,
                    "discrete uniform lead time requires 1 <= a <= b");
            std::vector<double> pmf(static_cast<std::size_t>(u.b), 0.0);
            const double p = 1.0 / static_cast<double>(u.b - u.a + 1);
            for (int k = u.a; k <= u.b; ++k)
              pmf[static_cast<std::size_t>(k - 1)] = p;
            return pmf;
          },
          [](const lead::Categorical& c) {
            require(!c.probabilities.empty(),
                    "categorical lead time needs at least one probability");
            double total = 0.0;
            for (double p : c.probabilities) {
              require(std::isfinite(p) && p >= 0.0,
                      "lead-time probabilities must be non-negative");
              total += p;
            }
            require(std::abs(total - 1.0) <= 1e-12,
                    "lead-time probabilities must sum to 1");
            return c.probabilities;
          },
      },
      spec);
}

}  // namespace

LeadTimeDist::LeadTimeDist(LeadTimeDistSpec spec)
    : spec_(std::move(spec)), pmf_(build_pmf(spec_)) {
  cdf_.resize(pmf_.size());
  std::partial_sum(pmf_.begin(), pmf_.end(), cdf_.begin());
  cdf_.back() = 1.0;
}

int LeadTimeDist::sample(RandomSource& rng) const {
  if (const auto* d = std::get_if<lead::Deterministic>(&spec_)) {
    return d->periods;
  }
  if (const auto* u = std::get_if<lead::DiscreteUniform>(&spec_)) {
    return static_cast<int>(rng.uniform_int(u->a, u->b));
  }
  const double u = rng.uniform01();
  const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
  auto k = static_cast<int>(it - cdf_.begin()) + 1;
  k = std::min(k, bound());
  // Never return a zero-probability value from accumulated rounding.
  while (pmf_[static_cast<std::size_t>(k - 1)] == 0.0 && k > 1) --k;
  return k;
}

double LeadTimeDist::probability(int k) const {
  if (k < 1 || k > bound()) return 0.0;
  return pmf_[static_cast<std::size_t>(k - 1)];
}

bool LeadTimeDist::deterministic() const {
  return std::count_if(pmf_.begin(), pmf_.end(),
                       [](double p) { return p > 0.0; }) == 1;
}

LeadTimeMoments LeadTimeDist::moments() const {
  double mean = 0.0;
  for (int k = 1; k <= bound(); ++k) mean += k * probability(k);
  double variance = 0.0;
  for (int k = 1; k <= bound(); ++k) {
    const double dk = k - mean;
    variance += dk * dk * probability(k);
  }
  return {mean, variance, bound(), pmf_.back()};
}

RhoPowerMoments LeadTimeDist::rho_power_moments(double rho) const {
  RhoPowerMoments m;
  double power = 1.0;
  for (int k = 1; k <= bound(); ++k) {
    power *= rho;
    m.first += probability(k) * power;
    m.second += probability(k) * power * power;
  }
  return m;
}

LeadTimeMoments leadtime_moments(const LeadTimeDistSpec& spec) {
  return LeadTimeDist(spec).moments();
}

RhoPowerMoments rho_power_moments(const LeadTimeDistSpec& spec, double rho) {
  return LeadTimeDist(spec).rho_power_moments(rho);
}

std::string describe(const LeadTimeDistSpec& spec) {
  std::ostringstream out;
  std::visit(overloaded{
                 [&](const lead::Deterministic& d) {
                   out << "deterministic(" << d.periods << ")";
                 },
                 [&](const lead::DiscreteUniform& u) {
                   out << "discrete_uniform(" << u.a << ", " << u.b << ")";
                 },
                 [&](const lead::Categorical& c) {
                   out << "categorical(";
                   for (std::size_t i = 0; i < c.probabilities.size(); ++i) {
                     out << (i ? ", " : "") << c.probabilities[i];
                   }
                   out << ")";
                 },
             },
             spec);
  return out.str();
}

}  // namespace bullwhip
