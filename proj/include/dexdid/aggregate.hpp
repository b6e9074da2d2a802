#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "dexdid/errors.hpp"
#include "dexdid/timeutil.hpp"
#include "dexdid/types.hpp"

/*
 * Fixed-interval aggregation of irregular trade points, plus the two series
 * transforms used downstream: z-score standardization over a reference
 * window and division by the value at a base slot.
 *
 * Slots are half-open intervals [origin + k*dt, origin + (k+1)*dt). Price
 * slots take the median of trade prices and forward-fill gaps; volume slots
 * sum unsigned volumes and leave gaps at zero.
 */

namespace dexdid {

namespace detail {

inline double median_sorted_copy(std::vector<double> v) {
  std::size_t n = v.size();
  auto mid = v.begin() + static_cast<std::ptrdiff_t>(n / 2);
  std::nth_element(v.begin(), mid, v.end());
  double hi = *mid;
  if (n % 2 == 1) return hi;
  double lo = *std::max_element(v.begin(), mid);
  return 0.5 * (lo + hi);
}

}  // namespace detail

// Median trade price per slot; empty slots carry the previous slot's value
// forward. Slots before the first observed trade stay absent, so the result
// is gap-free from first observation to the end of the span.
inline IntervalSeries aggregate_prices(const std::vector<TradePoint>& points, std::int64_t dt,
                                       std::int64_t origin, SlotRange span) {
  if (dt <= 0) throw std::invalid_argument("dt must be positive");
  IntervalSeries out;
  out.kind = SeriesKind::price;
  out.dt = dt;
  out.origin = origin;
  if (!points.empty()) out.asset = points.front().asset;

  std::vector<std::vector<double>> per_slot(static_cast<std::size_t>(span.size()));
  bool any = false;
  for (const auto& p : points) {
    std::int64_t s = slot_of(p.timestamp, origin, dt);
    if (!span.contains(s)) continue;
    per_slot[static_cast<std::size_t>(s - span.lo)].push_back(p.price);
    any = true;
  }
  if (!any)
    throw EmptySeries("no trades inside [" + std::to_string(span.lo) + ", " +
                      std::to_string(span.hi) + ")");

  bool seen = false;
  double last = 0.0;
  for (std::int64_t s = span.lo; s < span.hi; ++s) {
    auto& bucket = per_slot[static_cast<std::size_t>(s - span.lo)];
    if (!bucket.empty()) {
      last = detail::median_sorted_copy(bucket);
      seen = true;
    }
    if (seen) out.values.emplace_back(s, last);
  }
  return out;
}

// Total unsigned volume per slot, buys and sells alike; empty slots are 0.
inline IntervalSeries aggregate_volumes(const std::vector<TradePoint>& points, std::int64_t dt,
                                        std::int64_t origin, SlotRange span) {
  if (dt <= 0) throw std::invalid_argument("dt must be positive");
  IntervalSeries out;
  out.kind = SeriesKind::volume;
  out.dt = dt;
  out.origin = origin;
  if (!points.empty()) out.asset = points.front().asset;

  std::vector<double> sums(static_cast<std::size_t>(span.size()), 0.0);
  for (const auto& p : points) {
    std::int64_t s = slot_of(p.timestamp, origin, dt);
    if (!span.contains(s)) continue;
    sums[static_cast<std::size_t>(s - span.lo)] += p.volume;
  }
  out.values.reserve(sums.size());
  for (std::int64_t s = span.lo; s < span.hi; ++s)
    out.values.emplace_back(s, sums[static_cast<std::size_t>(s - span.lo)]);
  return out;
}

// Running prefix sum of a volume series, starting at the series' first slot.
inline IntervalSeries cumulate(const IntervalSeries& volumes) {
  if (volumes.kind != SeriesKind::volume)
    throw std::invalid_argument("cumulate expects a volume series");
  IntervalSeries out = volumes;
  out.kind = SeriesKind::cumulative_volume;
  double acc = 0.0;
  for (auto& [slot, v] : out.values) {
    acc += v;
    v = acc;
  }
  return out;
}

// Z-score against the mean and population standard deviation computed over
// the given window only; slots outside the window are transformed with the
// same parameters.
inline StandardizedSeries standardize(const IntervalSeries& series, SlotRange window) {
  std::vector<double> in_window;
  for (const auto& [slot, v] : series.values)
    if (window.contains(slot)) in_window.push_back(v);
  if (in_window.size() < 2)
    throw DegenerateSeries(series.asset + ": fewer than 2 points in standardization window");

  double mu = 0.0;
  for (double v : in_window) mu += v;
  mu /= static_cast<double>(in_window.size());
  double var = 0.0;
  for (double v : in_window) var += (v - mu) * (v - mu);
  var /= static_cast<double>(in_window.size());
  double sigma = std::sqrt(var);
  if (sigma == 0.0) throw DegenerateSeries(series.asset + ": zero variance in window");

  StandardizedSeries out;
  out.asset = series.asset;
  out.kind = series.kind;
  out.mu = mu;
  out.sigma = sigma;
  out.values.reserve(series.values.size());
  for (const auto& [slot, v] : series.values) out.values.emplace_back(slot, (v - mu) / sigma);
  return out;
}

// Scale the whole series by its value at base_slot, which becomes exactly 1.
inline IntervalSeries normalize_at(const IntervalSeries& series, std::int64_t base_slot) {
  auto base = series.at(base_slot);
  if (!base)
    throw CannotNormalize(series.asset + ": no value at slot " + std::to_string(base_slot));
  if (*base == 0.0)
    throw CannotNormalize(series.asset + ": zero value at slot " + std::to_string(base_slot));
  IntervalSeries out = series;
  for (auto& [slot, v] : out.values) v /= *base;
  return out;
}

// Cumulative-volume variant: a zero base shifts to the first nonzero
// cumulative slot inside the search window; a pool dormant through the whole
// window cannot be normalized.
inline IntervalSeries normalize_cumulative(const IntervalSeries& series, std::int64_t base_slot,
                                           SlotRange search) {
  auto base = series.at(base_slot);
  if (base && *base != 0.0) return normalize_at(series, base_slot);
  for (std::int64_t s = search.lo; s < search.hi; ++s) {
    auto v = series.at(s);
    if (v && *v != 0.0) return normalize_at(series, s);
  }
  throw CannotNormalize(series.asset + ": cumulative volume zero through search window");
}

}  // namespace dexdid
