#pragma once

// Brute-force reference computations. Each one follows the textbook
// definition directly and shares no code with the library.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace oracle {

inline double mean(const std::vector<double>& x) {
  return std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
}

/// Sample variance with the n - 1 denominator, two-pass.
inline double variance(const std::vector<double>& x) {
  const double m = mean(x);
  double s = 0.0;
  for (double v : x) s += (v - m) * (v - m);
  return s / static_cast<double>(x.size() - 1);
}

/// r_k = sum_{t<N-k} (x_t - m)(x_{t+k} - m) / sum_t (x_t - m)^2.
inline double acf_at(const std::vector<double>& x, int k) {
  const double m = mean(x);
  double num = 0.0;
  double den = 0.0;
  for (std::size_t t = 0; t < x.size(); ++t) den += (x[t] - m) * (x[t] - m);
  for (std::size_t t = 0; t + static_cast<std::size_t>(k) < x.size(); ++t) {
    num += (x[t] - m) * (x[t + static_cast<std::size_t>(k)] - m);
  }
  return num / den;
}

/// Solves A y = b by Gaussian elimination with partial pivoting.
inline std::vector<double> solve(std::vector<std::vector<double>> a,
                                 std::vector<double> b) {
  const std::size_t n = b.size();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    for (std::size_t r = col + 1; r < n; ++r) {
      if (std::abs(a[r][col]) > std::abs(a[pivot][col])) pivot = r;
    }
    std::swap(a[col], a[pivot]);
    std::swap(b[col], b[pivot]);
    if (a[col][col] == 0.0) throw std::runtime_error("singular system");
    for (std::size_t r = col + 1; r < n; ++r) {
      const double f = a[r][col] / a[col][col];
      for (std::size_t c = col; c < n; ++c) a[r][c] -= f * a[col][c];
      b[r] -= f * b[col];
    }
  }
  std::vector<double> y(n);
  for (std::size_t i = n; i-- > 0;) {
    double s = b[i];
    for (std::size_t c = i + 1; c < n; ++c) s -= a[i][c] * y[c];
    y[i] = s / a[i][i];
  }
  return y;
}

/// PACF at lag k: last coefficient of the order-k Yule-Walker solution
/// R phi = r with R_ij = r_|i-j|.
inline double pacf_at(const std::vector<double>& x, int k) {
  std::vector<double> r(static_cast<std::size_t>(k) + 1);
  for (int j = 0; j <= k; ++j) r[static_cast<std::size_t>(j)] = j == 0 ? 1.0 : acf_at(x, j);
  std::vector<std::vector<double>> a(static_cast<std::size_t>(k),
                                     std::vector<double>(static_cast<std::size_t>(k)));
  std::vector<double> b(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < k; ++j) {
      a[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
          r[static_cast<std::size_t>(std::abs(i - j))];
    }
    b[static_cast<std::size_t>(i)] = r[static_cast<std::size_t>(i) + 1];
  }
  return solve(a, b).back();
}

/// sup_x |F_a(x) - F_b(x)| by counting at every pooled value.
inline double ks_statistic(const std::vector<double>& a, const std::vector<double>& b) {
  std::vector<double> pooled = a;
  pooled.insert(pooled.end(), b.begin(), b.end());
  double d = 0.0;
  for (double x : pooled) {
    const auto fa = static_cast<double>(std::count_if(a.begin(), a.end(),
                                                      [x](double v) { return v <= x; })) /
                    static_cast<double>(a.size());
    const auto fb = static_cast<double>(std::count_if(b.begin(), b.end(),
                                                      [x](double v) { return v <= x; })) /
                    static_cast<double>(b.size());
    d = std::max(d, std::abs(fa - fb));
  }
  return d;
}

/// Sum over i = 0..L-1 of mu + rho^{i+1} (last - mu).
inline double ltd_mmse_sum(double last, int lead_time, double mu, double rho) {
  double s = 0.0;
  for (int i = 0; i < lead_time; ++i) s += mu + std::pow(rho, i + 1) * (last - mu);
  return s;
}

/// Standard normal CDF by Simpson integration of the density from 0.
inline double normal_cdf(double x) {
  const int steps = 20000;
  const double h = x / steps;
  auto f = [](double t) { return std::exp(-0.5 * t * t); };
  double s = f(0.0) + f(x);
  for (int i = 1; i < steps; ++i) s += f(i * h) * (i % 2 ? 4.0 : 2.0);
  return 0.5 + s * h / 3.0 / std::sqrt(2.0 * 3.14159265358979323846);
}

}  // namespace oracle
