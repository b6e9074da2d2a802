#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "dexdid/errors.hpp"
#include "dexdid/types.hpp"
#include "dexdid/u256.hpp"

namespace dexdid {

// Canonical Uniswap-V2 pair event signature hashes (keccak256 of the event
// declaration), topic0 of the respective logs.
inline constexpr std::string_view kSyncTopic =
    "0x1c411e9a96e071241c2f21f7726b17ae89e3cab4c78be50e062b03a9fffbbad1";
inline constexpr std::string_view kSwapTopic =
    "0xd78ad95fa46c994b6551d0da85fc275fe613ce37657fb8d5e3d130840159d822";

enum class PriceOrientation {
  base_per_asset,  // wETH per token; economically the asset's price
  asset_per_base,  // tokens per wETH
};

inline PriceOrientation parse_orientation(const std::string& s) {
  if (s == "base_per_asset") return PriceOrientation::base_per_asset;
  if (s == "asset_per_base") return PriceOrientation::asset_per_base;
  throw SpecError("price_orientation must be base_per_asset or asset_per_base, got '" + s + "'");
}

namespace detail {

inline double pow10d(int k) {
  static const auto table = [] {
    std::array<double, 37> t{};
    double p = 1.0;
    for (int i = 0; i <= 36; ++i) { t[static_cast<std::size_t>(i)] = p; p *= 10.0; }
    return t;
  }();
  if (k < 0 || k > 36) throw SpecError("token decimals out of [0,36]: " + std::to_string(k));
  return table[static_cast<std::size_t>(k)];
}

// Strips an optional 0x prefix and splits the payload into 32-byte ABI words.
inline std::vector<U256> abi_words(const std::string& data, std::size_t expected) {
  std::string_view hex{data};
  if (hex.size() >= 2 && hex[0] == '0' && (hex[1] == 'x' || hex[1] == 'X')) hex.remove_prefix(2);
  if (hex.size() != expected * 64)
    throw DecodeError("payload holds " + std::to_string(hex.size() / 64) + " words (" +
                      std::to_string(hex.size() % 64) + " stray chars), expected " +
                      std::to_string(expected));
  std::vector<U256> words;
  words.reserve(expected);
  for (std::size_t i = 0; i < expected; ++i)
    words.push_back(U256::from_hex_word(hex.substr(i * 64, 64)));
  return words;
}

}  // namespace detail

inline std::string encode_words(const std::vector<U256>& words) {
  std::string s = "0x";
  for (const auto& w : words) s += w.to_hex_word();
  return s;
}

struct Reserves {
  double base = 0.0;
  double asset = 0.0;
};

// Sync payload -> decimal-scaled (base, asset) reserves.
inline Reserves decode_sync(const RawLog& raw, const PoolMeta& meta) {
  if (raw.topics.empty() || raw.topics[0] != kSyncTopic)
    throw DecodeError("log is not a sync event");
  auto words = detail::abi_words(raw.data, 2);
  const U256& r0 = words[0];
  const U256& r1 = words[1];
  const U256& base_raw = meta.base_is_token0 ? r0 : r1;
  const U256& asset_raw = meta.base_is_token0 ? r1 : r0;
  if (base_raw.is_zero() || asset_raw.is_zero())
    throw DegenerateReserve("sync with zero reserve in pool " + raw.pool_address);
  return Reserves{base_raw.to_double() / detail::pow10d(meta.base_decimals),
                  asset_raw.to_double() / detail::pow10d(meta.asset_decimals)};
}

struct SwapDecoded {
  double volume = 0.0;  // unsigned quote-side notional
  int direction = 0;    // +1 base flowed in, -1 base flowed out, 0 degenerate
  bool anomalous = false;
};

// Swap payload -> quote-side gross volume. The wETH-side amount is the larger
// of in/out; direction is recorded but the volume stays unsigned.
inline SwapDecoded decode_swap(const RawLog& raw, const PoolMeta& meta) {
  if (raw.topics.empty() || raw.topics[0] != kSwapTopic)
    throw DecodeError("log is not a swap event");
  auto words = detail::abi_words(raw.data, 4);
  const U256& base_in = meta.base_is_token0 ? words[0] : words[1];
  const U256& base_out = meta.base_is_token0 ? words[2] : words[3];
  SwapDecoded d;
  const U256& gross = base_out < base_in ? base_in : base_out;
  d.volume = gross.to_double() / detail::pow10d(meta.base_decimals);
  if (base_out < base_in) d.direction = 1;
  else if (base_in < base_out) d.direction = -1;
  bool all_zero = true;
  for (const auto& w : words) all_zero = all_zero && w.is_zero();
  d.anomalous = all_zero;
  return d;
}

inline double compute_price(double reserves_base, double reserves_asset,
                            PriceOrientation orientation = PriceOrientation::base_per_asset) {
  if (reserves_base <= 0.0 || reserves_asset <= 0.0)
    throw DegenerateReserve("price undefined for non-positive reserves");
  return orientation == PriceOrientation::base_per_asset ? reserves_base / reserves_asset
                                                         : reserves_asset / reserves_base;
}

struct IngestStats {
  std::size_t swaps = 0;
  std::size_t syncs = 0;
  std::size_t orphan_swaps = 0;        // swap with no sync in its transaction
  std::size_t dropped_no_price = 0;    // swap before any sync at all
  std::size_t degenerate_syncs = 0;    // zero-reserve syncs, skipped
  std::size_t anomalous_swaps = 0;     // all-zero amounts
  std::size_t unknown_topics = 0;
};

// Streams one pool's logs (sorted by block, tx, log) into TradePoints: one
// point per swap, priced from the sync of the same transaction. A swap whose
// transaction carries no sync falls back to the last known reserves and is
// counted as an orphan; with no reserves known at all the point is dropped.
inline std::vector<TradePoint> build_trade_series(
    const std::vector<RawLog>& logs, const PoolMeta& meta,
    PriceOrientation orientation = PriceOrientation::base_per_asset,
    IngestStats* stats_out = nullptr) {
  IngestStats stats;
  std::vector<TradePoint> points;
  bool have_reserves = false;
  Reserves cur{};
  bool cur_in_tx = false;  // reserves came from a sync in the current (block, tx)
  std::uint64_t tx_block = 0;
  std::uint32_t tx_idx = 0;

  const RawLog* prev = nullptr;
  for (const auto& raw : logs) {
    if (prev) {
      auto key = [](const RawLog& l) {
        return std::tuple{l.block_number, l.tx_index, l.log_index};
      };
      if (!(key(*prev) < key(raw)))
        throw std::invalid_argument("logs not strictly ordered by (block, tx, log) at block " +
                                    std::to_string(raw.block_number));
    }
    prev = &raw;
    if (raw.topics.empty()) throw DecodeError("log without topics at block " + std::to_string(raw.block_number));

    if (raw.block_number != tx_block || raw.tx_index != tx_idx) {
      tx_block = raw.block_number;
      tx_idx = raw.tx_index;
      cur_in_tx = false;
    }

    if (raw.topics[0] == kSyncTopic) {
      ++stats.syncs;
      try {
        cur = decode_sync(raw, meta);
        have_reserves = true;
        cur_in_tx = true;
      } catch (const DegenerateReserve&) {
        ++stats.degenerate_syncs;
      }
    } else if (raw.topics[0] == kSwapTopic) {
      ++stats.swaps;
      SwapDecoded sw = decode_swap(raw, meta);
      if (sw.anomalous) ++stats.anomalous_swaps;
      if (!cur_in_tx) ++stats.orphan_swaps;
      if (!have_reserves) {
        ++stats.dropped_no_price;
        continue;
      }
      TradePoint p;
      p.asset = meta.asset_symbol;
      p.block = raw.block_number;
      p.timestamp = raw.block_timestamp;
      p.price = compute_price(cur.base, cur.asset, orientation);
      p.volume = sw.volume;
      p.reserves_base = cur.base;
      p.reserves_asset = cur.asset;
      p.tx_index = raw.tx_index;
      p.log_index = raw.log_index;
      p.direction = sw.direction;
      points.push_back(std::move(p));
    } else {
      ++stats.unknown_topics;
    }
  }
  if (stats_out) *stats_out = stats;
  return points;
}

}  // namespace dexdid
