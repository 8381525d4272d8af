#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <vector>

#include "bullwhip/analytic.hpp"
#include "bullwhip/errors.hpp"
#include "bullwhip/simulator.hpp"
#include "support/oracles.hpp"

using namespace bullwhip;

namespace {

EchelonConfig echelon(const std::string& name, ForecasterSpec f, LeadTimeDistSpec l,
                      double z = 0.0) {
  EchelonConfig e;
  e.name = name;
  e.forecaster = f;
  e.lead_time = l;
  e.z = z;
  return e;
}

ChainConfig retailer_chain(int m, int n, std::size_t periods) {
  ChainConfig c;
  c.demand = demand::IidUniform{4500, 5500};
  c.echelons = {echelon("retailer", forecast::ProductOfMAs{m, n}, lead::DiscreteUniform{1, 7})};
  c.periods = periods;
  return c;
}

std::vector<TraceRow> trace_of(const ChainConfig& c) {
  std::vector<TraceRow> rows;
  run_chain(c, [&rows](const TraceRow& r) { rows.push_back(r); });
  return rows;
}

std::vector<double> orders_of(const std::vector<TraceRow>& rows, std::size_t index) {
  std::vector<double> out;
  for (const auto& r : rows) {
    if (r.echelon == index) out.push_back(r.order);
  }
  return out;
}

}  // namespace

TEST(Estimators, BullwhipExamples) {
  const std::vector<double> d{3, 5, 4, 8, 6, 2, 7};
  const auto same = estimate_bm(d, d);
  EXPECT_DOUBLE_EQ(same.bm, 1.0);
  EXPECT_DOUBLE_EQ(same.variance_ratio, 1.0);

  std::vector<double> doubled = d;
  for (auto& v : doubled) v *= 2;
  const auto twice = estimate_bm(d, doubled);
  EXPECT_NEAR(twice.variance_ratio, 4.0, 1e-12);
  EXPECT_NEAR(twice.bm, 2.0, 1e-12);

  EXPECT_THROW(estimate_bm(std::vector<double>{5, 5, 5}, d), DegenerateSeries);
}

TEST(Estimators, NetStockExamples) {
  const std::vector<double> d{3, 5, 4, 8, 6, 2, 7};
  EXPECT_EQ(estimate_nsm(std::vector<double>(7, -4.0), d), 0.0);
  EXPECT_DOUBLE_EQ(estimate_nsm(d, d), 1.0);
  EXPECT_THROW(estimate_nsm(d, std::vector<double>(7, 1.0)), DegenerateSeries);
}

TEST(Estimators, RunningMomentsMatchTwoPass) {
  RandomSource rng(2);
  std::vector<double> x(5000);
  RunningMoments m;
  for (auto& v : x) {
    v = 1e6 + rng.normal();
    m.add(v);
  }
  EXPECT_NEAR(m.mean(), oracle::mean(x), 1e-8);
  EXPECT_NEAR(m.variance(), oracle::variance(x), 1e-8);
  const auto s = series_moments(x);
  EXPECT_NEAR(s.variance, oracle::variance(x), 1e-8);
}

// ---------------------------------------------------------------------------

TEST(Chain, ValidationNamesTheField) {
  ChainConfig c = retailer_chain(1, 1, 1000);
  c.echelons.clear();
  EXPECT_THROW(validate(c), ConfigError);

  c = retailer_chain(1, 1, 1000);
  c.warmup = 1000;
  try {
    validate(c);
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("warmup"), std::string::npos);
  }

  c = retailer_chain(0, 1, 10000);
  try {
    validate(c);
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("echelons[0] (retailer).forecaster"), std::string::npos)
        << e.what();
  }

  c = retailer_chain(1, 1, 10000);
  c.echelons[0].forecaster = forecast::LtdMovingAverage{7, 3};
  EXPECT_THROW(validate(c), ConfigError);  // M below the lead-time bound 7

  c = retailer_chain(1, 1, 10000);
  c.warmup = 5;
  EXPECT_THROW(validate(c), ConfigError);
}

TEST(Chain, WarmupAndBurnIn) {
  ChainConfig c = retailer_chain(10, 6, 10000);
  EXPECT_EQ(required_warmup(c), 10u + 7u);
  EXPECT_EQ(demand_burn_in(c), 100u);
  c.echelons.push_back(echelon("manufacturer", forecast::LtdMovingAverage{8, 7},
                               lead::DiscreteUniform{1, 7}));
  c.echelons.back().sigma.kind = SigmaMode::Kind::Empirical;
  EXPECT_EQ(required_warmup(c), 17u + (7 + 8 - 1 + 7) + 2u);
  EXPECT_EQ(demand_burn_in(c), 100u);
}

TEST(Chain, DeterministicChainHasNoOrderVariance) {
  ChainConfig c;
  c.demand = demand::Constant{5000};
  c.echelons = {echelon("retailer", forecast::ProductOfMAs{3, 4}, lead::Deterministic{2}),
                echelon("manufacturer", forecast::LtdMovingAverage{2, 3}, lead::Deterministic{3})};
  c.periods = 2000;
  c.warmup = 100;
  const auto r = run_chain(c);
  ASSERT_EQ(r.echelons.size(), 2u);
  for (const auto& e : r.echelons) {
    EXPECT_EQ(e.orders.variance, 0.0) << e.name;
    EXPECT_EQ(e.orders.mean, 5000.0) << e.name;
    EXPECT_FALSE(e.bm.has_value());
    EXPECT_FALSE(e.variance_ratio.has_value());
    EXPECT_FALSE(e.customer_ratio.has_value());
  }
  EXPECT_EQ(r.measured_periods, 1900u);
}

TEST(Chain, ConservationEveryPeriod) {
  ChainConfig c = retailer_chain(2, 3, 3000);
  c.echelons.push_back(echelon("manufacturer", forecast::ProductOfMAs{1, 2},
                               lead::Categorical{{0.2, 0.3, 0.5}}));
  for (auto& e : c.echelons) e.round_orders = true;
  for (const auto& row : trace_of(c)) {
    ASSERT_EQ(row.cumulative_received, row.cumulative_ordered - row.in_flight)
        << "t=" << row.period << " echelon " << row.echelon;
  }

  c.echelons[0].round_orders = false;
  c.echelons[1].round_orders = false;
  for (const auto& row : trace_of(c)) {
    ASSERT_NEAR(row.cumulative_received, row.cumulative_ordered - row.in_flight,
                1e-9 * std::max(1.0, std::abs(row.cumulative_ordered)));
  }
}

TEST(Chain, OrdersTelescope) {
  ChainConfig c = retailer_chain(3, 2, 2000);
  c.echelons[0].z = 1.5;
  c.echelons[0].sigma = SigmaMode{SigmaMode::Kind::Empirical, 0.0, 50};
  const auto rows = trace_of(c);
  // First period with a policy decision.
  std::size_t first = 0;
  while (!rows[first].target) ++first;
  for (std::size_t a = first + 1; a < rows.size(); a += 97) {
    for (std::size_t b = a; b < rows.size(); b += 131) {
      double sum_q = 0.0, sum_d = 0.0;
      for (std::size_t t = a; t <= b; ++t) {
        sum_q += rows[t].order;
        sum_d += rows[t - 1].demand;
      }
      ASSERT_NEAR(sum_q, *rows[b].target - *rows[a - 1].target + sum_d,
                  1e-9 * std::abs(sum_q));
    }
  }
}

TEST(Chain, OrdersDoNotDependOnZWithConstantSigma) {
  ChainConfig a = retailer_chain(4, 3, 3000);
  a.echelons.push_back(echelon("manufacturer", forecast::LtdMovingAverage{9, 7},
                               lead::DiscreteUniform{1, 7}));
  for (auto& e : a.echelons) e.sigma = SigmaMode{SigmaMode::Kind::Constant, 120.0, 2};
  ChainConfig b = a;
  b.echelons[0].z = 2.33;
  b.echelons[1].z = -0.7;
  const auto ra = trace_of(a), rb = trace_of(b);
  EXPECT_EQ(orders_of(ra, 0), orders_of(rb, 0));
  EXPECT_EQ(orders_of(ra, 1), orders_of(rb, 1));
  EXPECT_NE(ra.back().target, rb.back().target);
}

TEST(Chain, NegativeOrdersPropagateAsReturns) {
  const auto rows = trace_of(retailer_chain(1, 1, 5000));
  const auto q = orders_of(rows, 0);
  EXPECT_LT(*std::min_element(q.begin(), q.end()), 0.0);
}

TEST(Chain, LeadTimesStayWithinTheirSupport) {
  for (const auto& row : trace_of(retailer_chain(2, 2, 3000))) {
    ASSERT_GE(row.lead_time, 1);
    ASSERT_LE(row.lead_time, 7);
  }
}

TEST(Chain, RetailerMatchesProductFormula) {
  const auto r = replicate(retailer_chain(10, 10, 201000), 2);
  ASSERT_TRUE(r.echelons[0].bm);
  EXPECT_NEAR(*r.echelons[0].bm, 26.0, 1.0);
  const double analytic = bm_product_ma(10, 10, 4, 4, DemandMoments{5000, 1e6 / 12});
  EXPECT_NEAR(*r.echelons[0].variance_ratio / analytic, 1.0, 0.05);
  ASSERT_TRUE(r.echelons[0].nsm);
  EXPECT_GT(*r.echelons[0].nsm, 0.0);
  EXPECT_TRUE(std::isfinite(*r.echelons[0].nsm));
}

TEST(Chain, DeterministicLeadTimeMatchesMovingAverageFormula) {
  for (int n = 3; n <= 20; ++n) {
    ChainConfig c;
    c.demand = demand::IidNormal{100, 20};
    c.echelons = {echelon("retailer", forecast::LtdMovingAverage{n, 7}, lead::Deterministic{7})};
    c.periods = 101000;
    const auto r = run_chain(c);
    EXPECT_NEAR(*r.echelons[0].variance_ratio / bm_deterministic_ma(7, n), 1.0, 0.03)
        << "n=" << n;
  }
}

TEST(Chain, StochasticLeadTimeMatchesClosedForm) {
  const LeadTimeDist lead(lead::Categorical{{1.0 / 3, 1.0 / 3, 1.0 / 3}});
  for (int n : {3, 6, 10}) {
    ChainConfig c;
    c.demand = demand::IidNormal{100, 50};
    c.echelons = {echelon("retailer", forecast::LtdMovingAverage{n, 3}, lead.spec())};
    c.periods = 201000;
    const auto r = run_chain(c);
    const double analytic = bm_ltd_ma_stochastic(lead, n, DemandMoments{100, 2500});
    EXPECT_NEAR(*r.echelons[0].variance_ratio / analytic, 1.0, 0.05) << "n=" << n;
  }
}

TEST(Chain, MmseForecastsMatchClosedForms) {
  const LeadTimeDist lead(lead::DiscreteUniform{1, 4});
  {
    ChainConfig c;
    c.demand = demand::Ar1{20, 0.6, 5};
    const auto m = demand_moments(c.demand);
    c.echelons = {echelon("retailer", forecast::MmseAr1{m.mean, 0.6}, lead.spec())};
    c.periods = 201000;
    const auto r = run_chain(c);
    EXPECT_NEAR(*r.echelons[0].variance_ratio / bm_mmse_ar1(lead, 0.6, m), 1.0, 0.05);
  }
  {
    ChainConfig c;
    c.demand = demand::Arma11{20, 0.5, 0.3, 5};
    const auto m = demand_moments(c.demand);
    c.echelons = {echelon("retailer", forecast::MmseArma{m.mean, 0.5, 0.3}, lead.spec())};
    c.periods = 201000;
    const auto r = run_chain(c);
    EXPECT_NEAR(*r.echelons[0].variance_ratio / bm_mmse_arma(lead, 0.5, 0.3, m), 1.0, 0.05);
  }
}

TEST(Chain, ManufacturerUnderConstantDemand) {
  const auto manufacturer = [](int m, int n) {
    ChainConfig c;
    c.demand = demand::Constant{5000};
    c.echelons = {echelon("retailer", forecast::ProductOfMAs{m, n}, lead::DiscreteUniform{1, 7}),
                  echelon("manufacturer", forecast::ProductOfMAs{m, n}, lead::DiscreteUniform{1, 7})};
    c.periods = 101000;
    return *run_chain(c).echelons[1].variance_ratio;
  };
  const double base = manufacturer(1, 1);
  EXPECT_GT(base, 10.0);
  EXPECT_LT(base, 100.0);
  EXPECT_GT(manufacturer(20, 1) / manufacturer(1, 20), 5.0);
}

TEST(Chain, EmpiricalSigmaSettles) {
  ChainConfig c = retailer_chain(6, 6, 100000);
  c.echelons[0].z = 1.0;
  c.echelons[0].sigma = SigmaMode{SigmaMode::Kind::Empirical, 0.0, 1000};
  RunningMoments sigma;
  run_chain(c, [&sigma](const TraceRow& r) {
    if (r.period >= 5000 && r.target) sigma.add(*r.target - *r.forecast);
  });
  EXPECT_LT(std::sqrt(sigma.variance()) / sigma.mean(), 0.05);

  // An estimated safety stock adds order variance.
  ChainConfig fixed = retailer_chain(6, 6, 100000);
  const double with_fixed = *run_chain(fixed).echelons[0].variance_ratio;
  const double with_estimate = *run_chain(c).echelons[0].variance_ratio;
  EXPECT_GT(with_estimate, with_fixed);
}

// ---------------------------------------------------------------------------

TEST(Replication, SingleReplicationEqualsRunChain) {
  const auto c = retailer_chain(3, 3, 5000);
  const auto a = run_chain(c);
  const auto b = replicate(c, 1);
  EXPECT_EQ(a.echelons[0].orders.variance, b.echelons[0].orders.variance);
  EXPECT_EQ(a.echelons[0].bm, b.echelons[0].bm);
  EXPECT_FALSE(b.echelons[0].bm_half_width);
}

TEST(Replication, ResultIndependentOfJobs) {
  const auto c = retailer_chain(3, 3, 5000);
  const auto a = replicate(c, 5, 1);
  const auto b = replicate(c, 5, 3);
  EXPECT_EQ(a.echelons[0].variance_ratio, b.echelons[0].variance_ratio);
  EXPECT_EQ(a.echelons[0].variance_ratio_half_width, b.echelons[0].variance_ratio_half_width);
  EXPECT_EQ(a.echelons[0].net_stock.variance, b.echelons[0].net_stock.variance);
  EXPECT_EQ(a.replications, 5u);
}

TEST(Replication, ReplicationsUseDistinctStreams) {
  const auto c = retailer_chain(3, 3, 5000);
  EXPECT_NE(run_replication(c, 0).echelons[0].orders.variance,
            run_replication(c, 1).echelons[0].orders.variance);
  ChainConfig other = c;
  other.seed = 2;
  EXPECT_NE(run_chain(c).echelons[0].orders.variance, run_chain(other).echelons[0].orders.variance);
}

TEST(Replication, HalfWidthShrinksLikeOneOverRootR) {
  const auto c = retailer_chain(6, 2, 3000);
  const double w16 = *replicate(c, 16).echelons[0].variance_ratio_half_width;
  const double w64 = *replicate(c, 64).echelons[0].variance_ratio_half_width;
  EXPECT_GE(w64 / w16, 0.4);
  EXPECT_LE(w64 / w16, 0.6);
}

TEST(Replication, RejectsZero) {
  EXPECT_THROW(replicate(retailer_chain(1, 1, 5000), 0), ConfigError);
  EXPECT_THROW(aggregate({}), ConfigError);
}
