#include <gtest/gtest.h>

#include <cmath>
#include <string>
#include <vector>

#include "bullwhip/analytic.hpp"
#include "bullwhip/errors.hpp"

using namespace bullwhip;

namespace {

const DemandMoments kCv05{1.0, 0.25};  // sigma_D / mu_D = 0.5

/// Var(q) / Var(D) for ARMA(1,1) demand (mean mu, variance gamma0) with the
/// lead-time demand forecast L mu + Y_t h(L), Y_t the one-step prediction
/// minus mu and h(L) = (1 - rho^L) / (1 - rho). Conditions on the two
/// independent lead times L_t, L_{t-1} and uses the ARMA autocovariances.
double exact_arma_ratio(const LeadTimeDist& lead, double rho, double theta,
                        const DemandMoments& d) {
  const double gamma0 = d.variance;
  const double s2 = gamma0 * (1 - rho * rho) / (1 - 2 * rho * theta + theta * theta);
  const double gamma1 = rho * gamma0 - theta * s2;
  const double var_y = gamma0 - s2;
  const double cov_y_y1 = gamma1 - (rho - theta) * s2;  // Cov(Y_t, Y_{t-1})
  const double cov_y_x1 = gamma1;                       // Cov(Y_t, X_{t-1})
  const double cov_y1_x1 = gamma0 - s2;                 // Cov(Y_{t-1}, X_{t-1})
  double eh = 0.0, eh2 = 0.0, el = 0.0, el2 = 0.0;
  for (int k = 1; k <= lead.bound(); ++k) {
    const double p = lead.probability(k);
    const double h = (1 - std::pow(rho, k)) / (1 - rho);
    eh += p * h;
    eh2 += p * h * h;
    el += p * k;
    el2 += p * k * k;
  }
  const double var_l = el2 - el * el;
  const double var_q = 2 * d.mean * d.mean * var_l + 2 * eh2 * var_y + gamma0 -
                       2 * eh * eh * cov_y_y1 + 2 * eh * cov_y_x1 - 2 * eh * cov_y1_x1;
  return var_q / gamma0;
}

std::vector<LeadTimeDistSpec> lead_specs() {
  return {lead::Deterministic{3}, lead::DiscreteUniform{1, 3},
          lead::DiscreteUniform{1, 7}, lead::Categorical{{0.2, 0.0, 0.5, 0.3}}};
}

}  // namespace

TEST(DeterministicMa, Examples) {
  EXPECT_NEAR(bm_deterministic_ma(7, 7), 1 + 4.0 / 7, 1e-15);
  EXPECT_NEAR(bm_deterministic_ma(7, 14), 1 + 2.0 / 14 + 14.0 / 196, 1e-15);
  EXPECT_NEAR(bm_deterministic_ma(7, 1000000), 1.0, 1e-5);
  EXPECT_THROW(bm_deterministic_ma(0, 3), ConfigError);
  EXPECT_THROW(bm_deterministic_ma(3, 0), ConfigError);
}

TEST(LtdMaStochastic, ExactValues) {
  const LeadTimeDist u3(lead::DiscreteUniform{1, 3});
  EXPECT_NEAR(bm_ltd_ma_stochastic(u3, 3, kCv05), 2.259259259259259, 1e-13);
  EXPECT_NEAR(bm_ltd_ma_stochastic(u3, 10, kCv05), 1.16, 1e-13);
  EXPECT_NEAR(bm_ltd_ma_stochastic(u3, 15, kCv05), 1.085925925925926, 1e-13);

  const LeadTimeDist embedded(lead::Categorical{{0.5, 0.5, 0.0}});
  EXPECT_NEAR(bm_ltd_ma_stochastic(embedded, 3, kCv05), 1.5555555555555556, 1e-13);

  const LeadTimeDist u7(lead::DiscreteUniform{1, 7});
  EXPECT_NEAR(bm_ltd_ma_stochastic(u7, 7, kCv05), 1.8571428571428572, 1e-13);

  // mu_L = 2.3, sigma_L^2 = 0.61, p_M = 0.5, mu_D^2 / sigma_D^2 = 10 / 3.
  const LeadTimeDist cat(lead::Categorical{{0.2, 0.3, 0.5}});
  EXPECT_NEAR(bm_ltd_ma_stochastic(cat, 5, DemandMoments{10, 30}), 1.5466666666666666, 1e-13);
}

TEST(LtdMaStochastic, RejectsUnsupportedInputs) {
  const LeadTimeDist u3(lead::DiscreteUniform{1, 3});
  EXPECT_THROW(bm_ltd_ma_stochastic(u3, 2, kCv05), NotSupported);
  EXPECT_THROW(bm_ltd_ma_stochastic(u3, 3, DemandMoments{1, 0}), ConfigError);
}

TEST(LtdMaStochastic, ConsistentWithDeterministicFormula) {
  for (int lead = 1; lead <= 10; ++lead) {
    const LeadTimeDist det(lead::Deterministic{lead});
    for (int n = lead; n <= 30; ++n) {
      EXPECT_NEAR(bm_ltd_ma_stochastic(det, n, kCv05), bm_deterministic_ma(lead, n), 1e-12)
          << "L=" << lead << " n=" << n;
    }
  }
}

TEST(LtdMaStochastic, AtLeastOneAndTendsToOne) {
  for (const auto& spec : lead_specs()) {
    const LeadTimeDist lead(spec);
    for (int n = lead.bound(); n <= 60; ++n) {
      EXPECT_GE(bm_ltd_ma_stochastic(lead, n, kCv05), 1.0);
    }
    EXPECT_NEAR(bm_ltd_ma_stochastic(lead, 1000000, kCv05), 1.0, 1e-5);
  }
}

TEST(LtdMaStochastic, LeadTimeVarianceTermScalesWithOneOverNSquared) {
  // d BM / d sigma_L^2 = 2 mu_D^2 / (sigma_D^2 n^2).
  for (int n : {3, 7, 12}) {
    const LeadTimeMoments a{2.0, 0.5, 3, 0.2};
    auto b = a;
    b.variance += 0.1;
    const double slope = (bm_ltd_ma_stochastic(b, n, kCv05) - bm_ltd_ma_stochastic(a, n, kCv05)) / 0.1;
    EXPECT_NEAR(slope, 2 * 4.0 / (n * n), 1e-9);
  }
}

TEST(MmseAr1Measure, Examples) {
  for (int lead = 1; lead <= 10; ++lead) {
    EXPECT_EQ(bm_mmse_ar1(LeadTimeDist(lead::Deterministic{lead}), 0.0, kCv05), 1.0);
  }
  const LeadTimeDist u3(lead::DiscreteUniform{1, 3});
  EXPECT_NEAR(bm_mmse_ar1(u3, 0.0, kCv05), 1 + 2 * 4 * (2.0 / 3), 1e-12);
  EXPECT_GT(bm_mmse_ar1(u3, 0.6, kCv05), bm_mmse_ar1(u3, 0.0, kCv05));
  EXPECT_THROW(bm_mmse_ar1(u3, 1.0, kCv05), ConfigError);
}

TEST(MmseArmaMeasure, ReducesToAr1AtThetaZero) {
  for (const auto& spec : lead_specs()) {
    const LeadTimeDist lead(spec);
    for (int i = -9; i <= 9; ++i) {
      const double rho = i / 10.0;
      EXPECT_NEAR(bm_mmse_arma(lead, rho, 0.0, kCv05), bm_mmse_ar1(lead, rho, kCv05), 1e-12);
    }
  }
}

TEST(MmseArmaMeasure, ThetaEqualRhoIsWhiteNoise) {
  for (int i = -9; i <= 9; ++i) {
    const double rho = i / 10.0;
    EXPECT_NEAR(bm_mmse_arma(LeadTimeDist(lead::Deterministic{4}), rho, rho, kCv05), 1.0, 1e-12);
  }
}

TEST(MmseArmaMeasure, FiniteAndNonNegativeOnGrid) {
  for (const auto& spec : lead_specs()) {
    const LeadTimeDist lead(spec);
    for (int i = -9; i <= 9; ++i) {
      for (int j = -9; j <= 9; ++j) {
        const double bm = bm_mmse_arma(lead, i / 10.0, j / 10.0, kCv05);
        EXPECT_TRUE(std::isfinite(bm));
        EXPECT_GE(bm, 0.0);
      }
    }
  }
}

TEST(MmseArmaMeasure, MatchesExactVarianceOracle) {
  for (const auto& spec : lead_specs()) {
    const LeadTimeDist lead(spec);
    for (int i = -9; i <= 9; i += 2) {
      for (int j = -9; j <= 9; j += 3) {
        const double rho = i / 10.0, theta = j / 10.0;
        const double expected = exact_arma_ratio(lead, rho, theta, DemandMoments{10, 4});
        EXPECT_NEAR(bm_mmse_arma(lead, rho, theta, DemandMoments{10, 4}), expected,
                    1e-10 * expected)
            << "rho=" << rho << " theta=" << theta;
      }
    }
  }
}

TEST(MmseAr1Measure, LeadTimeVarianceTermIsUnscaled) {
  // Two lead-time laws with the same E[rho^L] structure differ only through
  // sigma_L^2 when rho = 0: slope 2 mu_D^2 / sigma_D^2.
  const LeadTimeDist a(lead::Categorical{{0.5, 0.0, 0.5}});
  const LeadTimeDist b(lead::Categorical{{0.0, 1.0, 0.0}});
  const double dv = a.moments().variance - b.moments().variance;
  EXPECT_NEAR((bm_mmse_ar1(a, 0.0, kCv05) - bm_mmse_ar1(b, 0.0, kCv05)) / dv, 8.0, 1e-12);
}

TEST(ProductMaMeasure, Examples) {
  const DemandMoments d{5000, 1e6 / 12};
  EXPECT_NEAR(bm_product_ma(1, 1, 4, 4, d), 2449.0, 1e-9);
  EXPECT_NEAR(bm_product_ma(20, 20, 4, 4, d), 7.48195, 1e-12);
  EXPECT_NEAR(bm_product_ma(10, 6, 4, 4, d), 27.255555555555556, 1e-11);
  for (int n : {1, 2, 6}) {
    EXPECT_NEAR(bm_product_ma(3, n, 4, 0, d), 2.0 * 16 / (n * n) + 8.0 / n + 1, 1e-12);
  }
  EXPECT_THROW(bm_product_ma(0, 1, 4, 4, d), ConfigError);
  EXPECT_THROW(bm_product_ma(1, 1, 4, 4, DemandMoments{1, 0}), ConfigError);
}

TEST(ProductMaMeasure, LeadTimeVarianceSlope) {
  // d BM / d sigma_L^2 = 2 (m+n-1)/(m^2 n^2) + 2 mu_D^2 / (sigma_D^2 m^2).
  const DemandMoments d{10, 25};
  for (int m : {1, 3, 10}) {
    for (int n : {1, 4, 20}) {
      const double slope = (bm_product_ma(m, n, 3, 2.5, d) - bm_product_ma(m, n, 3, 2.0, d)) / 0.5;
      const double expected = 2.0 * (m + n - 1) / (m * m * n * n) + 2.0 * 4.0 / (m * m);
      EXPECT_NEAR(slope, expected, 1e-9);
    }
  }
}

TEST(ProductMaMeasure, AtLeastOneAndTendsToOne) {
  const DemandMoments d{5000, 1e6 / 12};
  for (int m = 1; m <= 30; ++m) {
    for (int n = 1; n <= 30; ++n) EXPECT_GE(bm_product_ma(m, n, 4, 4, d), 1.0);
  }
  EXPECT_NEAR(bm_product_ma(100000, 100000, 4, 4, d), 1.0, 1e-3);
}

// ---------------------------------------------------------------------------

TEST(Formatting, TruncatesInsteadOfRounding) {
  EXPECT_EQ(format_truncated(1.5555555, 3), "1.555");
  EXPECT_EQ(format_truncated(1.16, 3), "1.160");
  EXPECT_EQ(format_truncated(2.0, 3), "2.000");
  EXPECT_EQ(format_significant_truncated(2449.00001, 5), "2449.0");
  EXPECT_EQ(format_significant_truncated(270.0864, 5), "270.08");
  EXPECT_EQ(format_significant_truncated(7.48195, 5), "7.4819");
  EXPECT_EQ(format_significant_truncated(27.25555, 5), "27.255");
}

TEST(Tables, PrintedRowsAndCells) {
  const auto t2 = ltd_ma_table_m3();
  ASSERT_EQ(t2.row_keys.front(), 3);
  EXPECT_EQ(t2.formatted(12, 0), "1.085");  // n = 15
  EXPECT_EQ(t2.formatted(7, 0), "1.160");   // n = 10
  EXPECT_EQ(t2.formatted(7, 1), "1.050");

  const auto t3 = ltd_ma_table_m7();
  ASSERT_EQ(t3.row_keys.front(), 7);
  EXPECT_EQ(t3.formatted(11, 1), "1.118");  // n = 18
  EXPECT_EQ(t3.formatted(5, 0), "1.301");   // n = 12
  EXPECT_EQ(t3.formatted(5, 1), "1.266");

  const auto t6 = product_ma_table();
  EXPECT_EQ(t6.formatted(3, 2), "27.255");  // m = 10, n = 6
  EXPECT_EQ(t6.formatted(1, 2), "270.08");  // m = 3, n = 6
}

TEST(Tables, CsvShape) {
  const auto csv = reference_table("ltd-ma-m3").to_csv();
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "n,p_M>0,p_M=0");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 14);
  EXPECT_EQ(csv.find(','), 1u);
  EXPECT_EQ(reference_tables().size(), 3u);
  EXPECT_THROW(reference_table("m4"), ConfigError);
}
