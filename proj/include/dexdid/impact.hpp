#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dexdid/did.hpp"
#include "dexdid/errors.hpp"
#include "dexdid/types.hpp"

/*
 * Economic-impact accounting. A significant negative price effect over the
 * event window, applied to the pre-event market capitalization, gives the
 * indirect loss; direct losses come straight from the event record. Rows
 * with an unknown direct loss still report the indirect loss as their total
 * but omit the share, and rows without a significant decline report no
 * indirect loss at all.
 */

namespace dexdid {

struct MarketCapInputs {
  double supply = 0.0;            // token units
  double anchor_price_eth = 0.0;  // wETH per token at the anchor slot
  double ethusd = 0.0;            // USD per ETH at the anchor slot
};

inline double market_cap(const MarketCapInputs& in) {
  if (!(in.supply > 0.0) || !(in.anchor_price_eth > 0.0) || !(in.ethusd > 0.0))
    throw std::invalid_argument("market cap inputs must be strictly positive");
  return in.supply * in.anchor_price_eth * in.ethusd;
}

// Supply snapshot in force at a block: greatest snapshot block <= block.
inline double supply_at(const std::vector<SupplySnapshot>& snapshots, const std::string& asset,
                        std::uint64_t block) {
  const SupplySnapshot* best = nullptr;
  for (const auto& s : snapshots) {
    if (s.asset != asset || s.block > block) continue;
    if (!best || s.block > best->block) best = &s;
  }
  if (!best)
    throw MissingSupply(asset + ": no supply snapshot at or before block " +
                        std::to_string(block));
  return best->total_supply;
}

// Last ETH/USD quote at or before ts.
inline double ethusd_at(const std::vector<EthUsdPoint>& quotes, std::int64_t ts) {
  const EthUsdPoint* best = nullptr;
  for (const auto& q : quotes) {
    if (q.timestamp > ts) continue;
    if (!best || q.timestamp > best->timestamp) best = &q;
  }
  if (!best) throw EmptySeries("no ETH/USD quote at or before " + std::to_string(ts));
  return best->usd_per_eth;
}

struct EffectSummary {
  double mean_effect = 0.0;  // fractional, e.g. -0.054 for -5.4%
  std::string cls = "ns";
};

namespace detail {

inline int class_rank(const std::string& cls) {
  if (cls == "***") return 4;
  if (cls == "**") return 3;
  if (cls == "*") return 2;
  if (cls == "·") return 1;
  return 0;
}

}  // namespace detail

// Average the coefficients of the highest significance class present in the
// window; with nothing below p = 0.1 the trend is the plain window mean and
// the class stays ns.
inline EffectSummary summarize_effect(const DiDFit& fit, SlotRange window) {
  int best = 0;
  bool any = false;
  for (const auto& [slot, g] : fit.gamma) {
    if (!window.contains(slot)) continue;
    any = true;
    best = std::max(best, detail::class_rank(classify(g.p_value)));
  }
  if (!any) throw std::invalid_argument("fit has no coefficients inside the summary window");

  EffectSummary out;
  double sum = 0.0;
  std::size_t n = 0;
  for (const auto& [slot, g] : fit.gamma) {
    if (!window.contains(slot)) continue;
    int rank = detail::class_rank(classify(g.p_value));
    if (best > 0 && rank != best) continue;
    sum += g.estimate;
    ++n;
    if (rank == best && best > 0) out.cls = classify(g.p_value);
  }
  out.mean_effect = sum / static_cast<double>(n);
  if (best == 0) out.cls = "ns";
  return out;
}

// Indirect loss exists only for a significant decline.
inline std::optional<double> indirect_loss(double cap_usd, const EffectSummary& effect) {
  if (effect.cls == "ns" || !(effect.mean_effect < 0.0)) return std::nullopt;
  return cap_usd * std::fabs(effect.mean_effect);
}

struct ImpactReport {
  std::int64_t event_id = 0;
  std::string asset;
  std::optional<double> direct_loss_usd;
  double market_cap_usd = 0.0;
  std::optional<EffectSummary> price_effect;
  std::optional<EffectSummary> volume_effect;
  std::optional<double> indirect_loss_usd;
  std::optional<double> indirect_share_pct;
  std::optional<double> total_loss_usd;
  std::string note;  // populated when a stage was skipped or aborted
};

// Assemble one report row. Total requires an indirect loss; the share
// additionally requires a known direct loss.
inline ImpactReport make_report(std::int64_t event_id, const std::string& asset,
                                std::optional<double> direct_loss_usd, double cap_usd,
                                std::optional<EffectSummary> price_effect,
                                std::optional<EffectSummary> volume_effect) {
  ImpactReport row;
  row.event_id = event_id;
  row.asset = asset;
  row.direct_loss_usd = direct_loss_usd;
  row.market_cap_usd = cap_usd;
  row.price_effect = price_effect;
  row.volume_effect = volume_effect;
  if (price_effect) row.indirect_loss_usd = indirect_loss(cap_usd, *price_effect);
  if (row.indirect_loss_usd) {
    if (direct_loss_usd) {
      row.total_loss_usd = *direct_loss_usd + *row.indirect_loss_usd;
      row.indirect_share_pct = 100.0 * *row.indirect_loss_usd / *row.total_loss_usd;
    } else {
      row.total_loss_usd = *row.indirect_loss_usd;
    }
  }
  return row;
}

struct ImpactTotals {
  double direct_usd = 0.0;  // only rows that carry a total, per report footnote
  double indirect_usd = 0.0;
  double total_usd = 0.0;
  std::optional<double> indirect_share_pct;
};

inline ImpactTotals totals(const std::vector<ImpactReport>& rows) {
  ImpactTotals out;
  for (const auto& row : rows) {
    if (row.total_loss_usd) {
      if (row.direct_loss_usd) out.direct_usd += *row.direct_loss_usd;
      out.total_usd += *row.total_loss_usd;
    }
    if (row.indirect_loss_usd) out.indirect_usd += *row.indirect_loss_usd;
  }
  if (out.total_usd > 0.0) out.indirect_share_pct = 100.0 * out.indirect_usd / out.total_usd;
  return out;
}

}  // namespace dexdid
