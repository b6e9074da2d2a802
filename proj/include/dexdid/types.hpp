#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace dexdid {

// One raw EVM event log of a liquidity pool, as it appears in the dump.
struct RawLog {
  std::string pool_address;          // 0x-prefixed lowercase hex
  std::vector<std::string> topics;   // topic0 selects the event type
  std::string data;                  // 0x-prefixed hex, 32-byte words
  std::uint64_t block_number = 0;
  std::int64_t block_timestamp = 0;  // UTC seconds
  std::uint32_t tx_index = 0;
  std::uint32_t log_index = 0;
};

struct PoolMeta {
  std::string pool_address;
  std::string base_symbol;   // the wETH side
  std::string asset_symbol;  // the governance asset
  int base_decimals = 18;
  int asset_decimals = 18;
  bool base_is_token0 = true;
};

// One decoded trade observation. price is quote-side per asset unit under the
// configured orientation; volume is the unsigned quote-side notional.
struct TradePoint {
  std::string asset;
  std::uint64_t block = 0;
  std::int64_t timestamp = 0;
  double price = 0.0;
  double volume = 0.0;
  double reserves_base = 0.0;
  double reserves_asset = 0.0;
  std::uint32_t tx_index = 0;
  std::uint32_t log_index = 0;
  int direction = 0;  // +1 base-in (buy of asset), -1 base-out, 0 degenerate
};

struct SupplySnapshot {
  std::string asset;
  std::uint64_t block = 0;
  double total_supply = 0.0;
};

struct CrimeEvent {
  int id = 0;
  std::string asset;
  std::int64_t announcement_ts = 0;  // midnight UTC of the announcement date
  std::string description;
  std::optional<double> direct_loss_usd;
};

struct EthUsdPoint {
  std::int64_t timestamp = 0;
  double usd_per_eth = 0.0;
};

enum class SeriesKind { price, volume, cumulative_volume };

inline const char* to_string(SeriesKind k) {
  switch (k) {
    case SeriesKind::price: return "price";
    case SeriesKind::volume: return "volume";
    case SeriesKind::cumulative_volume: return "cumulative_volume";
  }
  return "?";
}

// Half-open slot range [lo, hi).
struct SlotRange {
  std::int64_t lo = 0;
  std::int64_t hi = 0;
  bool contains(std::int64_t s) const { return s >= lo && s < hi; }
  std::int64_t size() const { return hi - lo; }
};

// Fixed-interval series for one asset. Slot s covers
// [origin + s*dt, origin + (s+1)*dt); slot indices are strictly increasing
// and may be negative (slots before the series origin).
struct IntervalSeries {
  std::string asset;
  SeriesKind kind = SeriesKind::price;
  std::int64_t dt = 0;      // seconds
  std::int64_t origin = 0;  // UTC seconds of the slot-0 boundary
  std::vector<std::pair<std::int64_t, double>> values;

  std::optional<double> at(std::int64_t slot) const {
    auto it = std::lower_bound(values.begin(), values.end(), slot,
                               [](const auto& p, std::int64_t s) { return p.first < s; });
    if (it != values.end() && it->first == slot) return it->second;
    return std::nullopt;
  }

  bool covers(const SlotRange& r) const {
    for (std::int64_t s = r.lo; s < r.hi; ++s)
      if (!at(s)) return false;
    return true;
  }
};

// Z-scored view of an IntervalSeries; mu/sigma come from the standardization
// window, every slot is transformed with the same pair.
struct StandardizedSeries {
  std::string asset;
  SeriesKind kind = SeriesKind::price;
  double mu = 0.0;
  double sigma = 0.0;
  std::vector<std::pair<std::int64_t, double>> values;

  std::optional<double> at(std::int64_t slot) const {
    auto it = std::lower_bound(values.begin(), values.end(), slot,
                               [](const auto& p, std::int64_t s) { return p.first < s; });
    if (it != values.end() && it->first == slot) return it->second;
    return std::nullopt;
  }
};

}  // namespace dexdid
