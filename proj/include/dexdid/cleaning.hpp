#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <set>
#include <vector>

#include "dexdid/errors.hpp"
#include "dexdid/types.hpp"

/*
 * Price-series outlier removal. Works in two stages on the base-10 log of
 * the trade-level price series:
 *
 *   1. A global scan flags trades whose modified Z-score against a centered
 *      rolling median exceeds a threshold.
 *   2. A local confirmation step keeps only flagged trades that behave like
 *      spikes: an abrupt move that reverts within a few blocks. Sustained
 *      level shifts are trends, not spikes, and survive.
 *
 * Confirmed spikes are physically deleted before aggregation. A separate
 * maturity check discards series too young or too sparse to analyze.
 */

namespace dexdid {

inline constexpr double kModifiedZScale = 0.6745;

namespace detail {

inline double median_of(std::vector<double>& buf) {
  if (buf.empty()) return std::numeric_limits<double>::quiet_NaN();
  std::size_t n = buf.size();
  auto mid = buf.begin() + static_cast<std::ptrdiff_t>(n / 2);
  std::nth_element(buf.begin(), mid, buf.end());
  double hi = *mid;
  if (n % 2 == 1) return hi;
  double lo = *std::max_element(buf.begin(), mid);
  return 0.5 * (lo + hi);
}

// Centered window [i-h, i+h] with h = window/2, clipped at the boundaries so
// edge points are still evaluated on a shrunken window.
inline std::pair<std::size_t, std::size_t> window_bounds(std::size_t i, std::size_t n,
                                                         std::size_t window) {
  std::size_t h = window / 2;
  std::size_t lo = i >= h ? i - h : 0;
  std::size_t hi = std::min(n - 1, i + h);
  return {lo, hi};
}

}  // namespace detail

inline std::vector<double> rolling_median(const std::vector<double>& xs, std::size_t window) {
  if (window == 0) throw std::invalid_argument("rolling window must be positive");
  std::size_t n = xs.size();
  std::vector<double> out(n);
  std::vector<double> buf;
  for (std::size_t i = 0; i < n; ++i) {
    auto [lo, hi] = detail::window_bounds(i, n, window);
    buf.assign(xs.begin() + static_cast<std::ptrdiff_t>(lo),
               xs.begin() + static_cast<std::ptrdiff_t>(hi + 1));
    out[i] = detail::median_of(buf);
  }
  return out;
}

// Modified Z-score against a precomputed rolling center:
//   z_i = 0.6745 * (x_i - center_i) / MAD_i
// with MAD over the same rolling window. A zero MAD yields 0 when the point
// sits on the median and an infinity sentinel otherwise, so constant-price
// stretches are never mass-flagged.
inline std::vector<double> modified_zscore(const std::vector<double>& xs,
                                           const std::vector<double>& center,
                                           std::size_t window) {
  if (center.size() != xs.size())
    throw std::invalid_argument("values and center must have equal length");
  if (window == 0) throw std::invalid_argument("rolling window must be positive");
  if (window > xs.size())
    throw WindowTooLong("window " + std::to_string(window) + " exceeds series length " +
                        std::to_string(xs.size()));
  std::size_t n = xs.size();
  std::vector<double> out(n);
  std::vector<double> buf;
  for (std::size_t i = 0; i < n; ++i) {
    auto [lo, hi] = detail::window_bounds(i, n, window);
    buf.clear();
    for (std::size_t j = lo; j <= hi; ++j) buf.push_back(std::fabs(xs[j] - center[i]));
    double mad = detail::median_of(buf);
    double dev = xs[i] - center[i];
    if (mad == 0.0)
      out[i] = dev == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
    else
      out[i] = kModifiedZScale * dev / mad;
  }
  return out;
}

struct CleanParams {
  std::size_t window = 1000;      // centered rolling-median span, in trades
  double threshold = 3.5;
  std::uint64_t block_radius = 5; // revert horizon around a flagged trade
  std::size_t local_window = 100; // preceding/succeeding trades for stage 2
};

// Stage 1: indices whose |modified z| of log10(price) exceeds the threshold.
inline std::vector<std::size_t> detect_global(const std::vector<TradePoint>& points,
                                              std::size_t window = 1000,
                                              double threshold = 3.5) {
  if (points.size() < 2) throw std::invalid_argument("need at least 2 points to detect outliers");
  std::vector<double> logp(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (!(points[i].price > 0.0) || !std::isfinite(points[i].price))
      throw std::invalid_argument("non-positive price at index " + std::to_string(i));
    logp[i] = std::log10(points[i].price);
  }
  std::size_t w = std::min(window, points.size());
  auto center = rolling_median(logp, w);
  auto z = modified_zscore(logp, center, w);
  std::vector<std::size_t> flagged;
  for (std::size_t i = 0; i < z.size(); ++i)
    if (std::fabs(z[i]) > threshold) flagged.push_back(i);
  return flagged;
}

// Stage 2: keep only flagged trades that spike and revert. A flagged trade is
// confirmed when (a) its log-price deviates more than the threshold in local
// z units from the local median, and (b) the median log-price of trades in
// the blocks just after it returns to within one local z of the median of
// the blocks just before. Missing history before the trade falls back to the
// local median; missing trades after it leave the revert unverified and the
// point unconfirmed.
inline std::vector<std::size_t> confirm_local(const std::vector<TradePoint>& points,
                                              const std::vector<std::size_t>& flagged,
                                              std::uint64_t block_radius = 5,
                                              std::size_t local_window = 100,
                                              double threshold = 3.5) {
  std::vector<double> logp(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) logp[i] = std::log10(points[i].price);

  std::vector<std::size_t> confirmed;
  std::vector<double> buf;
  for (std::size_t idx : flagged) {
    if (idx >= points.size()) throw std::invalid_argument("flagged index out of range");
    std::size_t lo = idx >= local_window ? idx - local_window : 0;
    std::size_t hi = std::min(points.size() - 1, idx + local_window);

    buf.assign(logp.begin() + static_cast<std::ptrdiff_t>(lo),
               logp.begin() + static_cast<std::ptrdiff_t>(hi + 1));
    double med_loc = detail::median_of(buf);
    buf.clear();
    for (std::size_t j = lo; j <= hi; ++j) buf.push_back(std::fabs(logp[j] - med_loc));
    double mad_loc = detail::median_of(buf);

    double dev = logp[idx] - med_loc;
    bool abrupt;
    if (mad_loc == 0.0) abrupt = dev != 0.0;
    else abrupt = std::fabs(kModifiedZScale * dev / mad_loc) > threshold;
    if (!abrupt) continue;

    // Same-block trades may belong to the spike itself, so the revert check
    // compares strictly earlier blocks against strictly later ones.
    std::uint64_t b = points[idx].block;
    buf.clear();
    for (std::size_t j = idx; j-- > 0;) {
      if (points[j].block + block_radius < b) break;
      if (points[j].block < b) buf.push_back(logp[j]);
    }
    double med_before = buf.empty() ? med_loc : detail::median_of(buf);

    buf.clear();
    for (std::size_t j = idx + 1; j < points.size(); ++j) {
      if (points[j].block > b + block_radius) break;
      if (points[j].block > b) buf.push_back(logp[j]);
    }
    if (buf.empty()) continue;  // no evidence of a revert
    double med_after = detail::median_of(buf);

    double tol = mad_loc / kModifiedZScale;  // one local z in raw log units
    if (std::fabs(med_after - med_before) <= tol) confirmed.push_back(idx);
  }
  return confirmed;
}

struct OutlierReport {
  std::vector<std::size_t> flagged_global;
  std::vector<std::size_t> confirmed_spikes;
  std::size_t removed_count = 0;
  std::size_t total_count = 0;
};

// Full filter: detect, confirm, delete, repeated until no flagged trade
// confirms. Deleting a spike shifts the rolling statistics near it, which can
// expose a neighbor that the first scan let through; iterating to the fixed
// point makes the filter exactly idempotent. Report indices refer to the
// input ordering. Terminates because every round deletes at least one trade.
inline std::pair<std::vector<TradePoint>, OutlierReport> remove_spikes(
    const std::vector<TradePoint>& points, const CleanParams& params = {}) {
  OutlierReport report;
  report.total_count = points.size();
  if (points.size() < 2) return {points, report};

  std::vector<TradePoint> current = points;
  std::vector<std::size_t> orig(points.size());
  for (std::size_t i = 0; i < orig.size(); ++i) orig[i] = i;
  std::set<std::size_t> flagged_orig, confirmed_orig;

  while (current.size() >= 2) {
    auto flagged = detect_global(current, params.window, params.threshold);
    for (std::size_t i : flagged) flagged_orig.insert(orig[i]);
    auto confirmed = confirm_local(current, flagged, params.block_radius, params.local_window,
                                   params.threshold);
    if (confirmed.empty()) break;

    std::set<std::size_t> drop(confirmed.begin(), confirmed.end());
    for (std::size_t i : drop) confirmed_orig.insert(orig[i]);
    std::vector<TradePoint> kept;
    std::vector<std::size_t> kept_orig;
    kept.reserve(current.size() - drop.size());
    kept_orig.reserve(current.size() - drop.size());
    for (std::size_t i = 0; i < current.size(); ++i) {
      if (drop.count(i)) continue;
      kept.push_back(current[i]);
      kept_orig.push_back(orig[i]);
    }
    current = std::move(kept);
    orig = std::move(kept_orig);
  }

  report.flagged_global.assign(flagged_orig.begin(), flagged_orig.end());
  report.confirmed_spikes.assign(confirmed_orig.begin(), confirmed_orig.end());
  report.removed_count = report.confirmed_spikes.size();
  return {std::move(current), std::move(report)};
}

struct MaturityParams {
  std::uint64_t min_span_blocks = 1'000'000;
  double max_mean_gap_blocks = 6'000.0;
};

// A series is mature when it spans at least min_span_blocks and its mean
// inter-point block gap stays at or below max_mean_gap_blocks.
inline bool maturity_check(const std::vector<TradePoint>& points,
                           const MaturityParams& params = {}) {
  if (points.size() < 2) return false;
  std::uint64_t span = points.back().block - points.front().block;
  if (span < params.min_span_blocks) return false;
  double mean_gap = static_cast<double>(span) / static_cast<double>(points.size() - 1);
  return mean_gap <= params.max_mean_gap_blocks;
}

}  // namespace dexdid
