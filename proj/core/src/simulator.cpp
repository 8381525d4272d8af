#include "bullwhip/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <memory>
#include <sstream>
#include <thread>

#include "bullwhip/errors.hpp"
#include "bullwhip/overloaded.hpp"
#include "bullwhip/policy.hpp"

namespace bullwhip {
namespace {

int forecaster_span(const ForecasterSpec& spec) {
  return std::visit(overloaded{
                        [](const forecast::LtdMovingAverage& f) {
                          return std::max(f.n, f.bound);
                        },
                        [](const forecast::MmseAr1&) { return 1; },
                        [](const forecast::MmseArma&) { return 1; },
                        [](const forecast::ProductOfMAs& f) {
                          return std::max(f.m, f.n);
                        },
                    },
                    spec);
}

std::string echelon_label(const ChainConfig& config, std::size_t i) {
  const auto& name = config.echelons[i].name;
  return "echelons[" + std::to_string(i) + "]" +
         (name.empty() ? std::string() : " (" + name + ")");
}

}  // namespace

void validate(const ChainConfig& config) {
  try {
    validate(config.demand);
  } catch (const ConfigError& e) {
    throw ConfigError(std::string("demand: ") + e.what());
  }
  if (config.echelons.empty()) {
    throw ConfigError("echelons: at least one echelon is required");
  }
  if (config.periods == 0) throw ConfigError("periods: must be >= 1");
  if (config.warmup >= config.periods) {
    throw ConfigError("warmup: must be smaller than periods");
  }
  for (std::size_t i = 0; i < config.echelons.size(); ++i) {
    const auto& e = config.echelons[i];
    const std::string where = echelon_label(config, i);
    try {
      validate(e.forecaster);
    } catch (const ConfigError& err) {
      throw ConfigError(where + ".forecaster: " + err.what());
    }
    int bound = 0;
    try {
      bound = LeadTimeDist(e.lead_time).bound();
    } catch (const ConfigError& err) {
      throw ConfigError(where + ".lead_time: " + err.what());
    }
    if (const auto* f = std::get_if<forecast::LtdMovingAverage>(&e.forecaster)) {
      if (f->bound < bound) {
        std::ostringstream msg;
        msg << where << ".forecaster: M = " << f->bound
            << " is below the lead-time bound " << bound;
        throw ConfigError(msg.str());
      }
    }
    if (e.sigma.kind == SigmaMode::Kind::Constant && !(e.sigma.value >= 0.0)) {
      throw ConfigError(where + ".sigma: constant value must be >= 0");
    }
    if (e.sigma.kind == SigmaMode::Kind::Empirical && e.sigma.window < 2) {
      throw ConfigError(where + ".sigma: empirical window must be >= 2");
    }
    if (!std::isfinite(e.z)) throw ConfigError(where + ".z: must be finite");
  }
  const std::size_t needed = required_warmup(config);
  if (config.warmup < needed) {
    std::ostringstream msg;
    msg << "warmup: " << config.warmup
        << " periods is shorter than the forecast windows need (" << needed
        << ")";
    throw ConfigError(msg.str());
  }
}

std::size_t required_warmup(const ChainConfig& config) {
  std::size_t total = 0;
  for (const auto& e : config.echelons) {
    const auto forecaster = make_forecaster(e.forecaster);
    const int bound = LeadTimeDist(e.lead_time).bound();
    total += static_cast<std::size_t>(forecaster->history_needed() + bound);
    if (e.sigma.kind == SigmaMode::Kind::Empirical) total += 2;
  }
  return total;
}

std::size_t demand_burn_in(const ChainConfig& config) {
  int span = 1;
  for (const auto& e : config.echelons) {
    span = std::max(span, forecaster_span(e.forecaster));
    span = std::max(span, LeadTimeDist(e.lead_time).bound());
  }
  return 10 * static_cast<std::size_t>(span);
}

// ---------------------------------------------------------------------------

void RunningMoments::add(double x) {
  ++count_;
  const double delta = x - mean_;
  mean_ += delta / static_cast<double>(count_);
  m2_ += delta * (x - mean_);
}

double RunningMoments::variance() const {
  return count_ < 2 ? 0.0 : m2_ / static_cast<double>(count_ - 1);
}

SeriesMoments series_moments(std::span<const double> series) {
  RunningMoments m;
  for (double x : series) m.add(x);
  return {m.mean(), m.variance()};
}

BmEstimate estimate_bm(const SeriesMoments& demand,
                       const SeriesMoments& orders) {
  if (!(demand.variance > 0.0)) {
    throw DegenerateSeries("demand series has zero variance");
  }
  if (demand.mean == 0.0) throw DegenerateSeries("demand series has zero mean");
  if (orders.mean == 0.0) throw DegenerateSeries("order series has zero mean");
  BmEstimate e;
  e.variance_ratio = orders.variance / demand.variance;
  e.bm = (orders.variance / orders.mean) / (demand.variance / demand.mean);
  return e;
}

BmEstimate estimate_bm(std::span<const double> demand,
                       std::span<const double> orders) {
  return estimate_bm(series_moments(demand), series_moments(orders));
}

double estimate_nsm(const SeriesMoments& net_stock,
                    const SeriesMoments& demand) {
  if (!(demand.variance > 0.0)) {
    throw DegenerateSeries("demand series has zero variance");
  }
  return net_stock.variance / demand.variance;
}

double estimate_nsm(std::span<const double> net_stock,
                    std::span<const double> demand) {
  return estimate_nsm(series_moments(net_stock), series_moments(demand));
}

// ---------------------------------------------------------------------------

namespace {

class Echelon {
 public:
  Echelon(const EchelonConfig& config, RandomSource rng)
      : config_(config),
        lead_(config.lead_time),
        rng_(std::move(rng)),
        forecaster_(make_forecaster(config.forecaster)),
        realized_(lead_.bound()),
        sigma_(config.sigma),
        policy_(config.z) {
    // With a fixed sigma the echelon starts out holding its safety stock, so
    // the first lift to S_t, and every order after it, is independent of z.
    if (config.sigma.kind == SigmaMode::Kind::Constant) {
      net_stock_ = config.z * config.sigma.value;
    }
  }

  /// Advances one period with this period's demand; returns q_t.
  double step(std::int64_t t, double demand, const TraceSink& trace,
              std::size_t index) {
    double arrivals = 0.0;
    auto due = std::partition(
        pipeline_.begin(), pipeline_.end(),
        [t](const PipelineOrder& o) { return o.arrives_at != t; });
    for (auto it = due; it != pipeline_.end(); ++it) arrivals += it->quantity;
    pipeline_.erase(due, pipeline_.end());
    net_stock_ += arrivals;
    in_flight_ -= arrivals;
    received_ += arrivals;

    if (previous_demand_) {
      forecaster_->observe_demand(*previous_demand_);
      if (const auto ltd = realized_.observe_demand(*previous_demand_)) {
        if (forecasts_.front()) sigma_.record_error(*ltd - *forecasts_.front());
        forecasts_.pop_front();
      }
    }

    const int lead_time = lead_.sample(rng_);
    const auto forecast = forecaster_->forecast(lead_time);
    const double last = previous_demand_.value_or(0.0);
    double order = last;
    std::optional<double> target;
    if (forecast && sigma_.ready()) {
      const auto decision = policy_.decide(*forecast, sigma_.sigma(), last,
                                           net_stock_ + in_flight_);
      order = decision.order;
      target = decision.target;
    }
    if (config_.round_orders) order = std::round(order);

    forecaster_->observe_lead_time(lead_time);
    realized_.observe_lead_time(lead_time);
    forecasts_.push_back(forecast);
    pipeline_.push_back({order, t, t + lead_time});
    in_flight_ += order;
    ordered_ += order;

    net_stock_ -= demand;
    previous_demand_ = demand;

    if (trace) {
      TraceRow row;
      row.period = t;
      row.echelon = index;
      row.demand = demand;
      row.lead_time = lead_time;
      row.forecast = forecast;
      row.target = target;
      row.order = order;
      row.arrivals = arrivals;
      row.net_stock = net_stock_;
      row.in_flight = in_flight_;
      row.cumulative_ordered = ordered_;
      row.cumulative_received = received_;
      trace(row);
    }
    return order;
  }

  double net_stock() const { return net_stock_; }

 private:
  const EchelonConfig& config_;
  LeadTimeDist lead_;
  RandomSource rng_;
  std::unique_ptr<Forecaster> forecaster_;
  RealizedLeadTimeDemand realized_;
  std::deque<std::optional<double>> forecasts_;
  ForecastErrorSigma sigma_;
  OrderUpToState policy_;
  std::vector<PipelineOrder> pipeline_;
  std::optional<double> previous_demand_;
  double net_stock_ = 0.0;
  double in_flight_ = 0.0;
  double ordered_ = 0.0;
  double received_ = 0.0;
};

struct EchelonAccumulator {
  RunningMoments demand;
  RunningMoments orders;
  RunningMoments net_stock;
};

template <class F>
std::optional<double> guarded(F&& f) {
  try {
    return f();
  } catch (const DegenerateSeries&) {
    return std::nullopt;
  }
}

}  // namespace

RunResult run_replication(const ChainConfig& config, std::size_t replication,
                          const TraceSink& trace) {
  validate(config);

  RandomSource demand_rng = RandomSource::stream(config.seed, replication, 0);
  DemandProcess demand(config.demand, config.innovation);
  if (std::holds_alternative<demand::Ar1>(config.demand) ||
      std::holds_alternative<demand::Arma11>(config.demand)) {
    demand.burn_in(demand_rng, demand_burn_in(config));
  }

  std::vector<Echelon> echelons;
  echelons.reserve(config.echelons.size());
  for (std::size_t i = 0; i < config.echelons.size(); ++i) {
    echelons.emplace_back(config.echelons[i],
                          RandomSource::stream(config.seed, replication, i + 1));
  }

  RunningMoments customer;
  std::vector<EchelonAccumulator> acc(echelons.size());
  const auto periods = static_cast<std::int64_t>(config.periods);
  const auto warmup = static_cast<std::int64_t>(config.warmup);
  for (std::int64_t t = 0; t < periods; ++t) {
    double d = demand.next(demand_rng);
    const bool measured = t >= warmup;
    if (measured) customer.add(d);
    for (std::size_t i = 0; i < echelons.size(); ++i) {
      const double q = echelons[i].step(t, d, trace, i);
      if (measured) {
        acc[i].demand.add(d);
        acc[i].orders.add(q);
        acc[i].net_stock.add(echelons[i].net_stock());
      }
      d = q;
    }
  }

  RunResult result;
  result.replications = 1;
  result.measured_periods = static_cast<std::size_t>(periods - warmup);
  const SeriesMoments customer_moments{customer.mean(), customer.variance()};
  for (std::size_t i = 0; i < echelons.size(); ++i) {
    EchelonStats s;
    s.name = config.echelons[i].name;
    s.demand = {acc[i].demand.mean(), acc[i].demand.variance()};
    s.orders = {acc[i].orders.mean(), acc[i].orders.variance()};
    s.net_stock = {acc[i].net_stock.mean(), acc[i].net_stock.variance()};
    if (s.demand.variance > 0.0) {
      s.variance_ratio = s.orders.variance / s.demand.variance;
    }
    s.bm = guarded([&] { return estimate_bm(s.demand, s.orders).bm; });
    s.nsm = guarded([&] { return estimate_nsm(s.net_stock, s.demand); });
    if (customer_moments.variance > 0.0) {
      s.customer_ratio = s.orders.variance / customer_moments.variance;
    }
    result.echelons.push_back(std::move(s));
  }
  return result;
}

RunResult run_chain(const ChainConfig& config, const TraceSink& trace) {
  return run_replication(config, 0, trace);
}

namespace {

struct MetricSummary {
  std::optional<double> mean;
  std::optional<double> half_width;
};

MetricSummary summarize(const std::vector<std::optional<double>>& values) {
  MetricSummary out;
  RunningMoments m;
  for (const auto& v : values) {
    if (!v) return out;
    m.add(*v);
  }
  out.mean = m.mean();
  if (m.count() >= 2) {
    out.half_width =
        1.96 * std::sqrt(m.variance() / static_cast<double>(m.count()));
  }
  return out;
}

SeriesMoments mean_moments(std::span<const RunResult> runs, std::size_t i,
                           SeriesMoments EchelonStats::*member) {
  SeriesMoments out;
  for (const auto& r : runs) {
    out.mean += (r.echelons[i].*member).mean;
    out.variance += (r.echelons[i].*member).variance;
  }
  const auto n = static_cast<double>(runs.size());
  out.mean /= n;
  out.variance /= n;
  return out;
}

}  // namespace

RunResult aggregate(std::span<const RunResult> runs) {
  if (runs.empty()) throw ConfigError("nothing to aggregate");
  if (runs.size() == 1) return runs.front();

  RunResult out;
  out.replications = 0;
  for (const auto& r : runs) out.replications += r.replications;
  out.measured_periods = runs.front().measured_periods;
  const std::size_t count = runs.front().echelons.size();
  for (std::size_t i = 0; i < count; ++i) {
    EchelonStats s;
    s.name = runs.front().echelons[i].name;
    s.demand = mean_moments(runs, i, &EchelonStats::demand);
    s.orders = mean_moments(runs, i, &EchelonStats::orders);
    s.net_stock = mean_moments(runs, i, &EchelonStats::net_stock);

    const auto collect = [&](std::optional<double> EchelonStats::*member) {
      std::vector<std::optional<double>> v;
      for (const auto& r : runs) v.push_back(r.echelons[i].*member);
      return summarize(v);
    };
    const auto vr = collect(&EchelonStats::variance_ratio);
    const auto bm = collect(&EchelonStats::bm);
    const auto nsm = collect(&EchelonStats::nsm);
    const auto cr = collect(&EchelonStats::customer_ratio);
    s.variance_ratio = vr.mean;
    s.variance_ratio_half_width = vr.half_width;
    s.bm = bm.mean;
    s.bm_half_width = bm.half_width;
    s.nsm = nsm.mean;
    s.nsm_half_width = nsm.half_width;
    s.customer_ratio = cr.mean;
    s.customer_ratio_half_width = cr.half_width;
    out.echelons.push_back(std::move(s));
  }
  return out;
}

RunResult replicate(const ChainConfig& config, std::size_t replications,
                    std::size_t jobs) {
  if (replications == 0) throw ConfigError("replications: must be >= 1");
  validate(config);
  std::vector<RunResult> runs(replications);
  jobs = std::clamp<std::size_t>(jobs, 1, replications);
  if (jobs == 1) {
    for (std::size_t r = 0; r < replications; ++r) {
      runs[r] = run_replication(config, r);
    }
  } else {
    std::vector<std::thread> workers;
    std::vector<std::exception_ptr> errors(jobs);
    for (std::size_t w = 0; w < jobs; ++w) {
      workers.emplace_back([&, w] {
        try {
          for (std::size_t r = w; r < replications; r += jobs) {
            runs[r] = run_replication(config, r);
          }
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
    for (auto& t : workers) t.join();
    for (const auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
  }
  return aggregate(runs);
}

}  // namespace bullwhip
