#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

#include "dexdid/types.hpp"

/*
 * Independent reference implementations for cross-checking the library.
 * Deliberately naive and textbook-shaped: dense normal equations solved by
 * Gaussian elimination, direct formula transcriptions, no code shared with
 * the headers under test.
 */

namespace oracle {

// Solves (X'X) b = X'y with partial-pivot Gaussian elimination.
inline std::vector<double> normal_equation_ols(const std::vector<std::vector<double>>& X,
                                               const std::vector<double>& y) {
  std::size_t n = X.size();
  if (n == 0 || y.size() != n) throw std::invalid_argument("bad design");
  std::size_t k = X[0].size();

  std::vector<std::vector<double>> a(k, std::vector<double>(k + 1, 0.0));
  for (std::size_t r = 0; r < k; ++r) {
    for (std::size_t c = 0; c < k; ++c)
      for (std::size_t i = 0; i < n; ++i) a[r][c] += X[i][r] * X[i][c];
    for (std::size_t i = 0; i < n; ++i) a[r][k] += X[i][r] * y[i];
  }

  for (std::size_t col = 0; col < k; ++col) {
    std::size_t pivot = col;
    for (std::size_t r = col + 1; r < k; ++r)
      if (std::fabs(a[r][col]) > std::fabs(a[pivot][col])) pivot = r;
    std::swap(a[col], a[pivot]);
    if (a[col][col] == 0.0) throw std::runtime_error("singular normal equations");
    for (std::size_t r = 0; r < k; ++r) {
      if (r == col) continue;
      double f = a[r][col] / a[col][col];
      for (std::size_t c = col; c <= k; ++c) a[r][c] -= f * a[col][c];
    }
  }
  std::vector<double> beta(k);
  for (std::size_t r = 0; r < k; ++r) beta[r] = a[r][k] / a[r][r];
  return beta;
}

// CR1 cluster-robust sandwich, transcribed index-by-index: no matrix library.
// V = c * (X'X)^-1 (sum_g s_g s_g') (X'X)^-1,  c = G/(G-1) * (N-1)/(N-k).
inline std::vector<std::vector<double>> cr1_sandwich(const std::vector<std::vector<double>>& X,
                                                     const std::vector<double>& resid,
                                                     const std::vector<int>& cluster) {
  std::size_t n = X.size();
  std::size_t k = X[0].size();

  // (X'X)^-1 by Gauss-Jordan
  std::vector<std::vector<double>> aug(k, std::vector<double>(2 * k, 0.0));
  for (std::size_t r = 0; r < k; ++r) {
    for (std::size_t c = 0; c < k; ++c)
      for (std::size_t i = 0; i < n; ++i) aug[r][c] += X[i][r] * X[i][c];
    aug[r][k + r] = 1.0;
  }
  for (std::size_t col = 0; col < k; ++col) {
    std::size_t pivot = col;
    for (std::size_t r = col + 1; r < k; ++r)
      if (std::fabs(aug[r][col]) > std::fabs(aug[pivot][col])) pivot = r;
    std::swap(aug[col], aug[pivot]);
    double d = aug[col][col];
    if (d == 0.0) throw std::runtime_error("singular X'X");
    for (std::size_t c = 0; c < 2 * k; ++c) aug[col][c] /= d;
    for (std::size_t r = 0; r < k; ++r) {
      if (r == col) continue;
      double f = aug[r][col];
      for (std::size_t c = 0; c < 2 * k; ++c) aug[r][c] -= f * aug[col][c];
    }
  }

  int n_clusters = 0;
  for (int g : cluster) n_clusters = std::max(n_clusters, g + 1);
  std::vector<std::vector<double>> score(static_cast<std::size_t>(n_clusters),
                                         std::vector<double>(k, 0.0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t c = 0; c < k; ++c)
      score[static_cast<std::size_t>(cluster[i])][c] += X[i][c] * resid[i];

  std::vector<std::vector<double>> meat(k, std::vector<double>(k, 0.0));
  for (const auto& s : score)
    for (std::size_t r = 0; r < k; ++r)
      for (std::size_t c = 0; c < k; ++c) meat[r][c] += s[r] * s[c];

  double G = static_cast<double>(n_clusters);
  double N = static_cast<double>(n);
  double cf = (G / (G - 1.0)) * ((N - 1.0) / (N - static_cast<double>(k)));

  auto bread = [&](std::size_t r, std::size_t c) { return aug[r][k + c]; };
  std::vector<std::vector<double>> tmp(k, std::vector<double>(k, 0.0));
  for (std::size_t r = 0; r < k; ++r)
    for (std::size_t c = 0; c < k; ++c)
      for (std::size_t m = 0; m < k; ++m) tmp[r][c] += bread(r, m) * meat[m][c];
  std::vector<std::vector<double>> V(k, std::vector<double>(k, 0.0));
  for (std::size_t r = 0; r < k; ++r)
    for (std::size_t c = 0; c < k; ++c) {
      for (std::size_t m = 0; m < k; ++m) V[r][c] += tmp[r][m] * bread(m, c);
      V[r][c] *= cf;
    }
  return V;
}

// Geometric random walk as a trade series: one trade per block step.
inline std::vector<dexdid::TradePoint> walk_trades(std::uint64_t seed, std::size_t n,
                                                   double sigma, std::uint64_t block0 = 1000,
                                                   std::uint64_t block_step = 3,
                                                   std::int64_t ts0 = 1'600'000'000,
                                                   std::int64_t ts_step = 40) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> z(0.0, 1.0);
  std::vector<dexdid::TradePoint> out(n);
  double logp = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    logp += sigma * z(rng);
    auto& p = out[i];
    p.asset = "W";
    p.block = block0 + block_step * i;
    p.timestamp = ts0 + ts_step * static_cast<std::int64_t>(i);
    p.price = std::exp(logp);
    p.volume = 1.0;
    p.tx_index = 0;
    p.log_index = 0;
  }
  return out;
}

}  // namespace oracle
