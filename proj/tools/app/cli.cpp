#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iterator>
#include <memory>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/core.h>

#include "bullwhip/analytic.hpp"
#include "bullwhip/errors.hpp"
#include "bullwhip/ltstats.hpp"
#include "bullwhip/overloaded.hpp"
#include "bullwhip/simulator.hpp"
#include "experiment.hpp"
#include "lead_time_arg.hpp"

namespace bullwhip::app {
namespace {

// All numeric output goes through fmt, which ignores the global locale.
std::string num(double v) { return fmt::format("{:.10g}", v); }
std::string num(const std::optional<double>& v) { return v ? num(*v) : ""; }

void emit(const std::string& text, const std::string& path, std::ostream& out) {
  if (path.empty()) {
    out << text;
    return;
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) throw ConfigError("--out: cannot write '" + path + "'");
  file << text;
}

// ---------------------------------------------------------------------------
// analytic

struct AnalyticArgs {
  int lead_time = 0;
  int m = 0;
  int n = 0;
  double rho = 0.0;
  double theta = 0.0;
  std::string lead_spec;
  std::optional<double> mu_l;
  std::optional<double> var_l;
  std::optional<int> max_l;
  std::optional<double> p_max;
  double mu_d = 0.0;
  double var_d = 0.0;
};

std::string analytic_csv(const std::string& model, double bm) {
  return "model,bm\n" + model + "," + num(bm) + "\n";
}

void add_demand_flags(CLI::App* cmd, AnalyticArgs& a) {
  cmd->add_option("--mu-d", a.mu_d, "μ_D, mean demand")->required();
  cmd->add_option("--var-d", a.var_d, "σ_D², demand variance (a variance, not a standard deviation)")
      ->required();
}

LeadTimeMoments stochastic_ma_moments(const AnalyticArgs& a) {
  if (!a.lead_spec.empty()) {
    if (a.mu_l || a.var_l || a.max_l || a.p_max) {
      throw ConfigError("stochastic-ma: give either --lead-time or --mu-l/--var-l/--max-l/--p-max");
    }
    return LeadTimeDist(parse_lead_time_arg(a.lead_spec)).moments();
  }
  if (!(a.mu_l && a.var_l && a.max_l && a.p_max)) {
    throw ConfigError("stochastic-ma: needs --lead-time, or all of --mu-l, --var-l, --max-l, --p-max");
  }
  if (*a.max_l < 1) throw ConfigError("stochastic-ma: --max-l must be >= 1");
  if (*a.var_l < 0) throw ConfigError("stochastic-ma: --var-l must be >= 0");
  if (*a.p_max < 0 || *a.p_max > 1) throw ConfigError("stochastic-ma: --p-max must lie in [0, 1]");
  return LeadTimeMoments{*a.mu_l, *a.var_l, *a.max_l, *a.p_max};
}

void setup_analytic(CLI::App& app, std::string& result, std::string& out_path) {
  auto* analytic = app.add_subcommand(
      "analytic", "Evaluate a closed-form bullwhip measure Var(q)/Var(D)");
  analytic->require_subcommand(1);
  auto args = std::make_shared<AnalyticArgs>();
  auto& a = *args;
  const char* lead_help =
      "lead-time distribution: det:L, uniform:a:b, or cat:p1,...,pM "
      "(P(L=k) for k=1..M)";

  auto* det_ma = analytic->add_subcommand(
      "deterministic-ma", "Deterministic lead time L, moving average of n lead-time demands");
  det_ma->add_option("--l", a.lead_time, "L, deterministic lead time in periods")->required();
  det_ma->add_option("--n", a.n, "n, moving-average window")->required();
  det_ma->add_option("--out", out_path, "write CSV here instead of stdout");
  det_ma->callback([&result, args] {
    result = analytic_csv("deterministic-ma", bm_deterministic_ma(args->lead_time, args->n));
  });

  auto* stoch_ma = analytic->add_subcommand(
      "stochastic-ma",
      "i.i.d. demand and lead times bounded by M, moving average of the n newest "
      "realised lead-time demands (n >= M)");
  stoch_ma->add_option("--n", a.n, "n, moving-average window")->required();
  stoch_ma->add_option("--lead-time", a.lead_spec, lead_help);
  stoch_ma->add_option("--mu-l", a.mu_l, "μ_L, mean lead time (with --var-l, --max-l, --p-max)");
  stoch_ma->add_option("--var-l", a.var_l, "σ_L², lead-time variance");
  stoch_ma->add_option("--max-l", a.max_l, "M, largest possible lead time");
  stoch_ma->add_option("--p-max", a.p_max, "p_M, probability that L = M");
  add_demand_flags(stoch_ma, a);
  stoch_ma->add_option("--out", out_path, "write CSV here instead of stdout");
  stoch_ma->callback([&result, args] {
    const DemandMoments d{args->mu_d, args->var_d};
    result = analytic_csv("stochastic-ma",
                          bm_ltd_ma_stochastic(stochastic_ma_moments(*args), args->n, d));
  });

  auto* ar1 = analytic->add_subcommand(
      "mmse-ar1", "AR(1) demand, MMSE lead-time-demand forecast, stochastic lead time");
  ar1->add_option("--lead-time", a.lead_spec, lead_help)->required();
  ar1->add_option("--rho", a.rho, "ρ, AR coefficient, |ρ| < 1")->required();
  add_demand_flags(ar1, a);
  ar1->add_option("--out", out_path, "write CSV here instead of stdout");
  ar1->callback([&result, args] {
    const LeadTimeDist lead(parse_lead_time_arg(args->lead_spec));
    result = analytic_csv(
        "mmse-ar1", bm_mmse_ar1(lead, args->rho, DemandMoments{args->mu_d, args->var_d}));
  });

  auto* arma = analytic->add_subcommand(
      "mmse-arma",
      "ARMA(1,1) demand, MMSE lead-time-demand forecast, stochastic lead time");
  arma->add_option("--lead-time", a.lead_spec, lead_help)->required();
  arma->add_option("--rho", a.rho, "ρ, AR coefficient, |ρ| < 1")->required();
  arma->add_option("--theta", a.theta, "θ, MA coefficient, |θ| < 1")->required();
  add_demand_flags(arma, a);
  arma->add_option("--out", out_path, "write CSV here instead of stdout");
  arma->callback([&result, args] {
    const LeadTimeDist lead(parse_lead_time_arg(args->lead_spec));
    result = analytic_csv("mmse-arma",
                          bm_mmse_arma(lead, args->rho, args->theta,
                                       DemandMoments{args->mu_d, args->var_d}));
  });

  auto* product = analytic->add_subcommand(
      "product-ma",
      "Product of a lead-time moving average (m) and a demand moving average (n)");
  product->add_option("--m", a.m, "m, lead-time moving-average window")->required();
  product->add_option("--n", a.n, "n, demand moving-average window")->required();
  product->add_option("--mu-l", a.mu_l, "μ_L, mean lead time")->required();
  product->add_option("--var-l", a.var_l, "σ_L², lead-time variance")->required();
  add_demand_flags(product, a);
  product->add_option("--out", out_path, "write CSV here instead of stdout");
  product->callback([&result, args] {
    result = analytic_csv(
        "product-ma", bm_product_ma(args->m, args->n, *args->mu_l, *args->var_l,
                                    DemandMoments{args->mu_d, args->var_d}));
  });
}

// ---------------------------------------------------------------------------
// table

void setup_table(CLI::App& app, std::string& result, std::string& out_path) {
  auto* table = app.add_subcommand(
      "table", "Print a closed-form reference table as CSV");
  auto name = std::make_shared<std::string>();
  table->add_option("name", *name,
                    "ltd-ma-m3 (measure vs n, M = 3), ltd-ma-m7 (M = 7) or "
                    "product-ma (m x n moving-average grid)")
      ->required();
  table->add_option("--out", out_path, "write CSV here instead of stdout");
  table->callback([&result, name] { result = reference_table(*name).to_csv(); });
}

// ---------------------------------------------------------------------------
// simulate / compare

struct RunArgs {
  std::string config_positional;
  std::string config_flag;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> replications;
  std::optional<std::size_t> periods;
  std::size_t jobs = 1;
  std::string trace_path;
  std::string grid_path;
  std::string metric = "variance_ratio";
  std::size_t echelon = 0;
  std::optional<double> tolerance;

  ExperimentFile load() const {
    if (!config_positional.empty() && !config_flag.empty() &&
        config_positional != config_flag) {
      throw ConfigError("give the config file either positionally or with --config");
    }
    const auto& path = config_flag.empty() ? config_positional : config_flag;
    if (path.empty()) throw ConfigError("missing experiment config file");
    auto file = load_experiment(path);
    if (seed) file.chain.seed = *seed;
    if (replications) file.replications = *replications;
    if (periods) file.chain.periods = *periods;
    if (tolerance) file.compare_tolerance = *tolerance;
    if (jobs < 1) throw ConfigError("--jobs must be >= 1");
    for (const auto& cell : expand_grid(file)) validate(cell.chain);
    return file;
  }
};

void add_run_flags(CLI::App* cmd, RunArgs& r, std::string& out_path) {
  cmd->add_option("file", r.config_positional, "experiment config file (JSON), same as --config");
  cmd->add_option("--config", r.config_flag, "experiment config file (JSON)");
  cmd->add_option("--seed", r.seed, "master seed; overrides the config");
  cmd->add_option("--replications", r.replications,
                  "independent replications; overrides the config")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--periods", r.periods,
                  "periods per replication, warm-up included; overrides the config")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--jobs", r.jobs, "worker threads for replications (output is unaffected)")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--out", out_path, "write CSV here instead of stdout");
}

std::optional<double> metric_of(const EchelonStats& s, const std::string& metric) {
  if (metric == "variance_ratio") return s.variance_ratio;
  if (metric == "bm") return s.bm;
  if (metric == "nsm") return s.nsm;
  if (metric == "customer_ratio") return s.customer_ratio;
  throw ConfigError("--metric: expected variance_ratio, bm, nsm or customer_ratio");
}

std::string cell_key(const std::optional<int>& v) { return v ? std::to_string(*v) : ""; }

std::string simulate(const RunArgs& r) {
  const auto file = r.load();
  const auto cells = expand_grid(file);
  if (!r.trace_path.empty() && cells.size() > 1) {
    throw ConfigError("--trace: only available for a config without grid");
  }
  if (r.echelon >= file.chain.echelons.size()) {
    throw ConfigError("--echelon: the chain has " +
                      std::to_string(file.chain.echelons.size()) + " echelons");
  }

  std::string csv =
      "m,n,echelon,name,replications,measured_periods,demand_mean,demand_var,"
      "order_mean,order_var,net_stock_mean,net_stock_var,variance_ratio,"
      "variance_ratio_hw,bm,bm_hw,nsm,nsm_hw,customer_ratio,customer_ratio_hw\n";
  std::vector<std::optional<double>> metric;
  for (const auto& cell : cells) {
    const auto result = replicate(cell.chain, file.replications, r.jobs);
    for (std::size_t i = 0; i < result.echelons.size(); ++i) {
      const auto& s = result.echelons[i];
      csv += fmt::format("{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}\n",
                         cell_key(cell.m), cell_key(cell.n), i, s.name,
                         result.replications, result.measured_periods,
                         num(s.demand.mean), num(s.demand.variance),
                         num(s.orders.mean), num(s.orders.variance),
                         num(s.net_stock.mean), num(s.net_stock.variance),
                         num(s.variance_ratio), num(s.variance_ratio_half_width),
                         num(s.bm), num(s.bm_half_width), num(s.nsm),
                         num(s.nsm_half_width), num(s.customer_ratio),
                         num(s.customer_ratio_half_width));
    }
    metric.push_back(metric_of(result.echelons[r.echelon], r.metric));
  }

  if (!r.grid_path.empty()) {
    const auto& g = file.grid;
    const std::size_t cols = std::max<std::size_t>(1, g.n.size());
    std::string grid = "m\\n";
    for (std::size_t c = 0; c < cols; ++c) grid += "," + cell_key(cells[c].n);
    grid += "\n";
    for (std::size_t row = 0; row * cols < cells.size(); ++row) {
      grid += cell_key(cells[row * cols].m);
      for (std::size_t c = 0; c < cols; ++c) grid += "," + num(metric[row * cols + c]);
      grid += "\n";
    }
    emit(grid, r.grid_path, std::cout);
  }

  if (!r.trace_path.empty()) {
    std::ofstream trace(r.trace_path, std::ios::binary);
    if (!trace) throw ConfigError("--trace: cannot write '" + r.trace_path + "'");
    trace << "period,echelon,demand,lead_time,forecast,target,order,arrivals,"
             "net_stock,in_flight,cumulative_ordered,cumulative_received\n";
    run_replication(cells.front().chain, 0, [&trace](const TraceRow& row) {
      trace << fmt::format("{},{},{},{},{},{},{},{},{},{},{},{}\n", row.period,
                           row.echelon, num(row.demand), row.lead_time,
                           num(row.forecast), num(row.target), num(row.order),
                           num(row.arrivals), num(row.net_stock),
                           num(row.in_flight), num(row.cumulative_ordered),
                           num(row.cumulative_received));
    });
  }
  return csv;
}

struct AnalyticCounterpart {
  std::string model;
  double bm = 0.0;
};

bool iid(const DemandProcessSpec& d) {
  return std::holds_alternative<demand::IidUniform>(d) ||
         std::holds_alternative<demand::IidNormal>(d);
}

/// The closed form whose assumptions the chain satisfies, or ModelMismatch.
AnalyticCounterpart counterpart(const ChainConfig& chain) {
  if (chain.echelons.size() != 1) {
    throw ModelMismatch("compare: closed forms exist for a single ordering echelon only; "
                        "the config has " +
                        std::to_string(chain.echelons.size()));
  }
  const auto& e = chain.echelons.front();
  if (e.sigma.kind == SigmaMode::Kind::Empirical && e.z != 0.0) {
    throw ModelMismatch(
        "compare: an estimated safety stock adds order variance no closed form covers");
  }
  const LeadTimeDist lead(e.lead_time);
  const auto& demand = chain.demand;
  return std::visit(
      overloaded{
          [&](const forecast::LtdMovingAverage& f) -> AnalyticCounterpart {
            if (!iid(demand)) {
              throw ModelMismatch("compare: ltd_moving_average needs i.i.d. demand");
            }
            if (lead.deterministic() && f.bound == lead.bound()) {
              return {"deterministic-ma", bm_deterministic_ma(lead.bound(), f.n)};
            }
            if (f.n < f.bound) {
              throw ModelMismatch(fmt::format(
                  "compare: no closed form for n = {} < M = {}", f.n, f.bound));
            }
            auto m = lead.moments();
            m.bound = f.bound;
            m.p_bound = lead.probability(f.bound);
            return {"stochastic-ma", bm_ltd_ma_stochastic(m, f.n, demand_moments(demand))};
          },
          [&](const forecast::ProductOfMAs& f) -> AnalyticCounterpart {
            if (!iid(demand)) {
              throw ModelMismatch("compare: product_of_mas needs i.i.d. demand");
            }
            const auto m = lead.moments();
            return {"product-ma", bm_product_ma(f.m, f.n, m.mean, m.variance,
                                            demand_moments(demand))};
          },
          [&](const forecast::MmseAr1& f) -> AnalyticCounterpart {
            const auto* d = std::get_if<demand::Ar1>(&demand);
            if (!d || d->rho != f.rho || demand_moments(demand).mean != f.mean) {
              throw ModelMismatch(
                  "compare: mmse_ar1 needs AR(1) demand with matching mean and ρ");
            }
            return {"mmse-ar1", bm_mmse_ar1(lead, f.rho, demand_moments(demand))};
          },
          [&](const forecast::MmseArma& f) -> AnalyticCounterpart {
            const auto* d = std::get_if<demand::Arma11>(&demand);
            if (!d || d->rho != f.rho || d->theta != f.theta ||
                demand_moments(demand).mean != f.mean) {
              throw ModelMismatch(
                  "compare: mmse_arma needs ARMA(1,1) demand with matching mean, ρ, θ");
            }
            return {"mmse-arma",
                    bm_mmse_arma(lead, f.rho, f.theta, demand_moments(demand))};
          },
      },
      e.forecaster);
}

struct CompareOutcome {
  std::string csv;
  bool within = true;
};

CompareOutcome compare(const RunArgs& r) {
  const auto file = r.load();
  const auto cells = expand_grid(file);
  std::vector<AnalyticCounterpart> analytic;
  for (const auto& cell : cells) analytic.push_back(counterpart(cell.chain));

  CompareOutcome outcome;
  outcome.csv =
      "m,n,model,analytic_bm,simulated_bm,ci_half_width,relative_gap,within_tolerance\n";
  for (std::size_t i = 0; i < cells.size(); ++i) {
    const auto result = replicate(cells[i].chain, file.replications, r.jobs);
    const auto& s = result.echelons.front();
    if (!s.variance_ratio) {
      throw ModelMismatch("compare: simulated demand has no variance");
    }
    const double gap = std::abs(*s.variance_ratio - analytic[i].bm) / analytic[i].bm;
    const bool ok = gap <= file.compare_tolerance;
    outcome.within = outcome.within && ok;
    outcome.csv += fmt::format("{},{},{},{},{},{},{},{}\n", cell_key(cells[i].m),
                               cell_key(cells[i].n), analytic[i].model,
                               num(analytic[i].bm), num(s.variance_ratio),
                               num(s.variance_ratio_half_width), num(gap),
                               ok ? "yes" : "no");
  }
  return outcome;
}

// ---------------------------------------------------------------------------
// analyze

struct AnalyzeArgs {
  std::string orders_path;
  int max_lag = 40;
  std::vector<std::size_t> sizes;
  std::size_t pairs = 100;
  double alpha = 0.05;
  std::uint64_t seed = 1;
  double acf_threshold = 0.85;
  double ks_threshold = 0.85;
  std::string series = "daily";
};

std::string analyze(const AnalyzeArgs& a) {
  auto records = load_orders_file(a.orders_path);
  // Both the correlogram and the KS windows read the log in time order.
  std::stable_sort(records.begin(), records.end(),
                   [](const OrderRecord& x, const OrderRecord& y) {
                     return x.order_date < y.order_date;
                   });
  std::vector<double> series;
  if (a.series == "daily") {
    for (const auto& d : daily_average_lead_time(records)) series.push_back(d.mean_lead_time);
  } else if (a.series == "orders") {
    series = lead_times(records);
  } else {
    throw ConfigError("--series: expected daily or orders");
  }
  const auto r = acf(series, a.max_lag);
  const auto p = pacf(series, a.max_lag);

  KsProtocolConfig ks;
  ks.pairs = a.pairs;
  ks.alpha = a.alpha;
  ks.seed = a.seed;
  const auto all_lead_times = lead_times(records);
  if (a.sizes.empty()) {
    ks.sample_sizes.clear();
    for (const std::size_t s : KsProtocolConfig{}.sample_sizes) {
      if (2 * s <= all_lead_times.size()) ks.sample_sizes.push_back(s);
    }
    if (ks.sample_sizes.empty()) {
      throw InsufficientData(fmt::format(
          "analyze: {} orders, need at least 100 for the KS protocol",
          all_lead_times.size()));
    }
  } else {
    ks.sample_sizes = a.sizes;
  }
  const auto ratios = pairwise_ks_ratio(all_lead_times, ks);

  std::string report = "lag,acf,pacf,band_lower,band_upper\n";
  for (int k = 1; k <= a.max_lag; ++k) {
    report += fmt::format("{},{},{},{},{}\n", k, num(r.coefficients[k]),
                          num(p.coefficients[k]), num(-r.band), num(r.band));
  }
  report += "\nsample_size,pairs,pass_ratio\n";
  for (const auto& x : ratios) {
    report += fmt::format("{},{},{}\n", x.sample_size, x.pairs, num(x.pass_ratio));
  }

  std::vector<std::string> findings;
  const auto outside = [&](const Correlogram& c) {
    return static_cast<int>(std::lround((1.0 - c.fraction_inside_band()) * a.max_lag));
  };
  if (r.fraction_inside_band() < a.acf_threshold ||
      p.fraction_inside_band() < a.acf_threshold) {
    findings.push_back(fmt::format(
        "autocorrelation: {}/{} ACF and {}/{} PACF lags outside ±{:.4f}", outside(r),
        a.max_lag, outside(p), a.max_lag, r.band));
  }
  for (const auto& x : ratios) {
    if (x.pass_ratio < a.ks_threshold) {
      findings.push_back(fmt::format(
          "distribution shift: KS pass ratio {} at sample size {} below {}",
          num(x.pass_ratio), x.sample_size, num(a.ks_threshold)));
    }
  }
  report += "\nverdict: ";
  if (findings.empty()) {
    report += "consistent with i.i.d.";
  } else {
    report += "not i.i.d.";
    for (const auto& f : findings) report += "; " + f;
  }
  report += "\n";
  return report;
}

void setup_analyze(CLI::App& app, std::string& result, std::string& out_path) {
  auto* cmd = app.add_subcommand(
      "analyze", "Check an order log's lead times for autocorrelation and "
                 "distribution shift");
  auto args = std::make_shared<AnalyzeArgs>();
  auto& a = *args;
  cmd->add_option("orders", a.orders_path,
                  "CSV with header order_date,delivery_date,quantity")
      ->required();
  cmd->add_option("--max-lag", a.max_lag, "largest ACF/PACF lag k")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--series", a.series,
                  "correlogram input: daily (mean lead time per order date) or orders")
      ->check(CLI::IsMember({"daily", "orders"}));
  cmd->add_option("--sizes", a.sizes,
                  "KS sample sizes s (default: those of 50,100,200,500 that fit)")
      ->delimiter(',');
  cmd->add_option("--pairs", a.pairs, "KS sample pairs per size")->check(CLI::PositiveNumber);
  cmd->add_option("--alpha", a.alpha, "KS significance level α");
  cmd->add_option("--seed", a.seed, "seed for drawing KS sample pairs");
  cmd->add_option("--acf-threshold", a.acf_threshold,
                  "least fraction of ACF and PACF lags inside ±1.96/√N to accept");
  cmd->add_option("--ks-threshold", a.ks_threshold,
                  "least KS pass ratio, at every size, to accept");
  cmd->add_option("--out", out_path, "write the report here instead of stdout");
  cmd->callback([&result, args] { result = analyze(*args); });
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err) {
  CLI::App app{"Bullwhip effect: closed forms, simulation, lead-time diagnostics",
               "bullwhip"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "help for every subcommand");

  std::string result;
  std::string out_path;
  int exit_code = kOk;

  setup_analytic(app, result, out_path);
  setup_table(app, result, out_path);

  auto sim_args = std::make_shared<RunArgs>();
  auto* sim = app.add_subcommand(
      "simulate", "Run a supply-chain experiment and print per-echelon statistics");
  add_run_flags(sim, *sim_args, out_path);
  sim->add_option("--trace", sim_args->trace_path,
                  "write the per-period trace of replication 0 here");
  sim->add_option("--grid-out", sim_args->grid_path,
                  "write one metric as an m x n matrix here");
  sim->add_option("--metric", sim_args->metric,
                  "matrix metric: variance_ratio (Var q / Var D), bm, nsm, "
                  "customer_ratio (Var q / Var customer demand)")
      ->check(CLI::IsMember({"variance_ratio", "bm", "nsm", "customer_ratio"}));
  sim->add_option("--echelon", sim_args->echelon,
                  "matrix echelon index, 0 = nearest the customers");
  sim->callback([&result, sim_args] { result = simulate(*sim_args); });

  auto cmp_args = std::make_shared<RunArgs>();
  auto* cmp = app.add_subcommand(
      "compare", "Simulate a single-echelon experiment next to its closed form");
  add_run_flags(cmp, *cmp_args, out_path);
  cmp->add_option("--tolerance", cmp_args->tolerance,
                  "largest accepted relative gap; overrides the config");
  cmp->callback([&result, &exit_code, cmp_args] {
    auto outcome = compare(*cmp_args);
    result = std::move(outcome.csv);
    if (!outcome.within) exit_code = kToleranceExceeded;
  });

  setup_analyze(app, result, out_path);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
    emit(result, out_path, out);
  } catch (const CLI::CallForHelp&) {
    out << app.help("", CLI::AppFormatMode::Normal);
    return kOk;
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      app.exit(e, out, err);
      return kOk;
    }
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  }
  return exit_code;
}

}  // namespace bullwhip::app
