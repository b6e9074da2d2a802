#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "dexdid/errors.hpp"
#include "dexdid/types.hpp"

/*
 * Counterfactual selection for one target asset against a candidate
 * universe. Three stages over Pearson correlations of standardized series:
 *
 *   1. keep candidates with r strictly above t_r,
 *   2. keep the top c by r (ties at the boundary are all kept),
 *   3. keep candidates at or above the mean correlation of stage 2.
 *
 * Output is ordered by r descending, ties broken by symbol, so identical
 * inputs always give identical sets.
 */

namespace dexdid {

struct CorrelationResult {
  std::string target;
  std::string candidate;
  double r = 0.0;
  std::size_t overlap_points = 0;
};

struct SelectionConfig {
  double t_r = 0.4;
  std::size_t c = 10;
  std::size_t min_overlap = 30;
};

struct CounterfactualSet {
  std::int64_t event_id = 0;
  SeriesKind kind = SeriesKind::price;
  std::vector<CorrelationResult> members;
  std::size_t stage1_size = 0;
  std::size_t stage2_size = 0;
  std::size_t stage3_size = 0;
};

// Pearson correlation over slots present in both series and inside window.
inline CorrelationResult correlate(const StandardizedSeries& target,
                                   const StandardizedSeries& candidate, SlotRange window,
                                   std::size_t min_overlap = 30) {
  std::vector<std::pair<double, double>> pairs;
  for (const auto& [slot, zt] : target.values) {
    if (!window.contains(slot)) continue;
    auto zc = candidate.at(slot);
    if (zc) pairs.emplace_back(zt, *zc);
  }
  if (pairs.size() < min_overlap)
    throw InsufficientOverlap(target.asset + " vs " + candidate.asset + ": " +
                              std::to_string(pairs.size()) + " overlapping slots, need " +
                              std::to_string(min_overlap));

  double n = static_cast<double>(pairs.size());
  double mx = 0.0, my = 0.0;
  for (const auto& [x, y] : pairs) {
    mx += x;
    my += y;
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, syy = 0.0, sxy = 0.0;
  for (const auto& [x, y] : pairs) {
    sxx += (x - mx) * (x - mx);
    syy += (y - my) * (y - my);
    sxy += (x - mx) * (y - my);
  }
  if (sxx == 0.0 || syy == 0.0)
    throw DegenerateSeries(target.asset + " vs " + candidate.asset +
                           ": zero variance over overlap");
  CorrelationResult out;
  out.target = target.asset;
  out.candidate = candidate.asset;
  out.r = sxy / std::sqrt(sxx * syy);
  out.overlap_points = pairs.size();
  return out;
}

// Stages 1-3 over precomputed correlations. Kept separate from the
// correlation pass so threshold sweeps re-rank without re-correlating.
inline CounterfactualSet select_from_correlations(std::vector<CorrelationResult> correlations,
                                                  const SelectionConfig& config) {
  std::sort(correlations.begin(), correlations.end(),
            [](const CorrelationResult& a, const CorrelationResult& b) {
              if (a.r != b.r) return a.r > b.r;
              return a.candidate < b.candidate;
            });

  std::vector<CorrelationResult> stage1;
  for (const auto& c : correlations)
    if (c.r > config.t_r) stage1.push_back(c);
  if (stage1.empty())
    throw NoCounterfactuals("no candidate exceeds t_r = " + std::to_string(config.t_r));

  std::size_t cut = std::min(config.c, stage1.size());
  while (cut < stage1.size() && stage1[cut].r == stage1[cut - 1].r) ++cut;
  std::vector<CorrelationResult> stage2(stage1.begin(),
                                        stage1.begin() + static_cast<std::ptrdiff_t>(cut));

  // Extended precision keeps the all-equal case on the >= branch exactly.
  long double sum = 0.0L;
  for (const auto& c : stage2) sum += c.r;
  double mean_r = static_cast<double>(sum / static_cast<long double>(stage2.size()));

  CounterfactualSet out;
  out.stage1_size = stage1.size();
  out.stage2_size = stage2.size();
  for (const auto& c : stage2)
    if (c.r >= mean_r) out.members.push_back(c);
  out.stage3_size = out.members.size();
  return out;
}

// Correlate a target against every candidate, skipping the target itself and
// candidates without enough usable overlap, then rank and refine.
inline CounterfactualSet select(const StandardizedSeries& target,
                                const std::vector<StandardizedSeries>& universe, SlotRange window,
                                const SelectionConfig& config) {
  std::vector<CorrelationResult> correlations;
  for (const auto& candidate : universe) {
    if (candidate.asset == target.asset) continue;
    try {
      correlations.push_back(correlate(target, candidate, window, config.min_overlap));
    } catch (const InsufficientOverlap&) {
    } catch (const DegenerateSeries&) {
    }
  }
  auto out = select_from_correlations(std::move(correlations), config);
  out.kind = target.kind;
  return out;
}

struct SweepRow {
  double t_r = 0.0;
  std::size_t min_members = 0;
  double mean_members = 0.0;
  double mean_r = 0.0;  // pooled over all selected members; NaN when none
};

// Re-run selection per event across a threshold grid. Events whose stage 1
// comes up empty contribute a zero member count rather than an error.
inline std::vector<SweepRow> sweep_thresholds(
    const std::vector<std::vector<CorrelationResult>>& per_event, const SelectionConfig& base,
    const std::vector<double>& grid) {
  if (grid.empty()) throw std::invalid_argument("threshold grid is empty");
  if (per_event.empty()) throw std::invalid_argument("no events to sweep");
  std::vector<SweepRow> rows;
  rows.reserve(grid.size());
  for (double t_r : grid) {
    SelectionConfig cfg = base;
    cfg.t_r = t_r;
    SweepRow row;
    row.t_r = t_r;
    std::size_t min_count = std::numeric_limits<std::size_t>::max();
    std::size_t total = 0;
    double r_sum = 0.0;
    for (const auto& correlations : per_event) {
      std::size_t count = 0;
      try {
        auto set = select_from_correlations(correlations, cfg);
        count = set.members.size();
        for (const auto& m : set.members) r_sum += m.r;
      } catch (const NoCounterfactuals&) {
      }
      min_count = std::min(min_count, count);
      total += count;
    }
    row.min_members = min_count;
    row.mean_members = static_cast<double>(total) / static_cast<double>(per_event.size());
    row.mean_r = total == 0 ? std::numeric_limits<double>::quiet_NaN()
                            : r_sum / static_cast<double>(total);
    rows.push_back(row);
  }
  return rows;
}

}  // namespace dexdid
