#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "dexdid/errors.hpp"
#include "dexdid/ingest.hpp"
#include "dexdid/io.hpp"
#include "dexdid/synth.hpp"
#include "dexdid/timeutil.hpp"
#include "dexdid/types.hpp"
#include "dexdid/u256.hpp"

/*
 * Trade-level market fixture: a full synthetic input bundle (raw pool logs,
 * pool metadata, supplies, ETH/USD quotes, event list) with known injected
 * effects, in exactly the formats the pipeline ingests. Prices follow
 * hourly equicorrelated log-returns; each trade becomes a sync+swap pair in
 * one transaction. Everything derives from the seed.
 *
 * The bundle also plants the awkward cases ingestion must survive: a swap
 * before the first sync, a swap-only transaction, an all-zero swap, periodic
 * sync-only transactions, and price spikes that revert within a few blocks.
 */

namespace dexdid {

struct FixtureEvent {
  int id = 0;
  std::size_t asset_index = 0;
  std::int64_t announcement_ts = 0;
  std::string description;
  std::optional<double> direct_loss_usd;
  double price_step = 0.0;     // fractional step applied from the announcement on
  double volume_factor = 1.0;  // multiplies volumes during the surge window
  double volume_days = 2.0;
  bool dormant = false;        // asset's pool stops trading early
};

struct SpikeSpec {
  std::size_t asset_index = 0;
  std::size_t hour = 0;
  double factor = 10.0;
};

struct FixtureSpec {
  std::uint64_t seed = 1;
  std::int64_t start_ts = 1609459200;  // 2021-01-01
  std::size_t days = 185;
  std::size_t n_assets = 12;
  double pairwise_corr = 0.8;
  double hourly_sigma = 0.004;
  double drift = 0.0;
  std::size_t trades_per_hour = 1;
  double liquidity_eth = 1000.0;
  double usd_per_eth = 2000.0;
  double dormant_days = 20.0;
  std::uint64_t genesis_block = 10'000'000;
  std::int64_t block_time = 15;
  std::vector<FixtureEvent> events;
  std::vector<SpikeSpec> spikes;
  bool preseed_swap = true;  // swap before any sync; ingestion must drop it
  bool orphan_swap = true;   // swap-only transaction priced off prior reserves
  bool zero_swap = true;     // all-zero amounts
};

inline FixtureSpec parse_fixture_spec(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SchemaError(path + ": cannot open file");
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw SchemaError(path + ": invalid JSON: " + e.what());
  }
  FixtureSpec spec;
  auto get = [&](const char* key, auto& field) {
    if (j.contains(key)) field = j[key].get<std::decay_t<decltype(field)>>();
  };
  get("seed", spec.seed);
  if (j.contains("start_date")) spec.start_ts = parse_iso_date(j["start_date"].get<std::string>());
  get("days", spec.days);
  get("n_assets", spec.n_assets);
  get("pairwise_corr", spec.pairwise_corr);
  get("hourly_sigma", spec.hourly_sigma);
  get("drift", spec.drift);
  get("trades_per_hour", spec.trades_per_hour);
  get("liquidity_eth", spec.liquidity_eth);
  get("usd_per_eth", spec.usd_per_eth);
  get("dormant_days", spec.dormant_days);
  get("preseed_swap", spec.preseed_swap);
  get("orphan_swap", spec.orphan_swap);
  get("zero_swap", spec.zero_swap);
  for (const auto& je : j.value("events", nlohmann::json::array())) {
    FixtureEvent e;
    e.id = je.at("id").get<int>();
    e.asset_index = je.at("asset_index").get<std::size_t>();
    e.announcement_ts = parse_iso_date(je.at("announcement").get<std::string>());
    e.description = je.value("description", std::string{});
    if (je.contains("direct_loss_usd")) e.direct_loss_usd = je["direct_loss_usd"].get<double>();
    e.price_step = je.value("price_step", 0.0);
    e.volume_factor = je.value("volume_factor", 1.0);
    e.volume_days = je.value("volume_days", 2.0);
    e.dormant = je.value("dormant", false);
    if (e.asset_index >= spec.n_assets) throw SchemaError(path + ": event asset_index out of range");
    spec.events.push_back(std::move(e));
  }
  for (const auto& js : j.value("spikes", nlohmann::json::array())) {
    SpikeSpec s;
    s.asset_index = js.at("asset_index").get<std::size_t>();
    s.hour = js.at("hour").get<std::size_t>();
    s.factor = js.value("factor", 10.0);
    if (s.asset_index >= spec.n_assets) throw SchemaError(path + ": spike asset_index out of range");
    spec.spikes.push_back(s);
  }
  return spec;
}

namespace detail {

// Integral token amount at the pool's decimals, built from micro-units so
// the 256-bit value never involves float division.
inline U256 scaled_amount(double units, int decimals) {
  if (decimals < 6 || decimals > 24) throw SpecError("fixture supports 6..24 decimals");
  if (!(units >= 0.0) || units > 9e12) throw SpecError("fixture amount out of range");
  auto micro = static_cast<unsigned long long>(std::llround(units * 1e6));
  unsigned __int128 v = micro;
  for (int k = 6; k < decimals; ++k) v *= 10;
  return U256::from_u128(v);
}

struct TxUnit {
  std::uint64_t block = 0;
  std::size_t asset_index = 0;
  bool has_sync = false;
  U256 sync_words[2];
  bool has_swap = false;
  U256 swap_words[4];
};

inline std::string fixture_pool_address(std::size_t i) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "0x%040llx", 0xa110c8000ULL + static_cast<unsigned long long>(i));
  return buf;
}

inline std::string fixture_symbol(std::size_t i) {
  char buf[8];
  std::snprintf(buf, sizeof(buf), "GT%02zu", i);
  return buf;
}

}  // namespace detail

struct FixtureBundle {
  std::vector<RawLog> logs;
  std::vector<PoolMeta> pools;
  std::vector<SupplySnapshot> supplies;
  std::vector<EthUsdPoint> ethusd;
  std::vector<CrimeEvent> events;
};

inline FixtureBundle generate_fixture(const FixtureSpec& spec) {
  if (spec.n_assets < 2) throw SpecError("fixture needs at least 2 assets");
  if (spec.trades_per_hour < 1 || spec.trades_per_hour > 4)
    throw SpecError("trades_per_hour must lie in 1..4");
  if (!(spec.pairwise_corr >= 0.0 && spec.pairwise_corr < 1.0))
    throw SpecError("pairwise correlation must lie in [0, 1)");

  FixtureBundle out;
  std::size_t hours = spec.days * 24;

  // pools, supplies, events
  std::set<std::size_t> dormant_assets;
  for (const auto& e : spec.events)
    if (e.dormant) dormant_assets.insert(e.asset_index);
  for (std::size_t i = 0; i < spec.n_assets; ++i) {
    PoolMeta m;
    m.pool_address = detail::fixture_pool_address(i);
    m.base_symbol = "WETH";
    m.asset_symbol = detail::fixture_symbol(i);
    m.base_decimals = 18;
    m.asset_decimals = i == 1 ? 6 : (i == 2 ? 8 : 18);
    m.base_is_token0 = i % 2 == 0;
    out.pools.push_back(std::move(m));

    SupplySnapshot s0{detail::fixture_symbol(i), spec.genesis_block,
                      1e7 * static_cast<double>(i + 1)};
    out.supplies.push_back(s0);
    SupplySnapshot s1 = s0;
    s1.block = spec.genesis_block + static_cast<std::uint64_t>(hours) * 3600ULL /
                                        static_cast<std::uint64_t>(spec.block_time) / 2;
    s1.total_supply = s0.total_supply * 1.02;
    out.supplies.push_back(s1);
  }
  for (const auto& e : spec.events) {
    CrimeEvent ce;
    ce.id = e.id;
    ce.asset = detail::fixture_symbol(e.asset_index);
    ce.announcement_ts = e.announcement_ts;
    ce.description = e.description;
    ce.direct_loss_usd = e.direct_loss_usd;
    out.events.push_back(std::move(ce));
  }

  // hourly ETH/USD with a small deterministic ripple to exercise LOCF
  for (std::size_t h = 0; h < hours; ++h)
    out.ethusd.push_back({spec.start_ts + static_cast<std::int64_t>(h) * 3600,
                          spec.usd_per_eth + static_cast<double>(h % 7) - 3.0});

  // hourly log-price grid, one common factor per hour
  detail::NormalSource grid_noise(spec.seed);
  double rho = spec.pairwise_corr;
  double w_common = std::sqrt(rho);
  double w_idio = std::sqrt(1.0 - rho);
  std::vector<std::vector<double>> logp(spec.n_assets, std::vector<double>(hours));
  for (std::size_t i = 0; i < spec.n_assets; ++i)
    logp[i][0] = std::log(0.005 * static_cast<double>(1 + i));
  for (std::size_t h = 1; h < hours; ++h) {
    double common = grid_noise.normal();
    for (std::size_t i = 0; i < spec.n_assets; ++i) {
      double r = spec.drift + spec.hourly_sigma * (w_common * common + w_idio * grid_noise.normal());
      logp[i][h] = logp[i][h - 1] + r;
    }
  }
  for (const auto& e : spec.events) {
    if (e.price_step == 0.0) continue;
    auto h_tau = static_cast<std::size_t>((e.announcement_ts - spec.start_ts) / 3600);
    for (std::size_t h = h_tau; h < hours; ++h) logp[e.asset_index][h] += std::log1p(e.price_step);
  }

  auto block_of = [&](std::int64_t ts) {
    return spec.genesis_block +
           static_cast<std::uint64_t>((ts - spec.start_ts) / spec.block_time);
  };

  std::vector<detail::TxUnit> units;
  auto emit_trade = [&](std::size_t i, std::int64_t ts, double price, double volume,
                        int direction) {
    const PoolMeta& m = out.pools[i];
    detail::TxUnit u;
    u.block = block_of(ts);
    u.asset_index = i;
    u.has_sync = true;
    U256 rb = detail::scaled_amount(spec.liquidity_eth, m.base_decimals);
    U256 ra = detail::scaled_amount(spec.liquidity_eth / price, m.asset_decimals);
    u.sync_words[0] = m.base_is_token0 ? rb : ra;
    u.sync_words[1] = m.base_is_token0 ? ra : rb;
    u.has_swap = true;
    U256 vb = detail::scaled_amount(volume, m.base_decimals);
    U256 va = detail::scaled_amount(volume / price, m.asset_decimals);
    // swap payload: [amount0In, amount1In, amount0Out, amount1Out]
    std::size_t base_in = m.base_is_token0 ? 0 : 1;
    std::size_t asset_in = m.base_is_token0 ? 1 : 0;
    std::size_t base_out = m.base_is_token0 ? 2 : 3;
    std::size_t asset_out = m.base_is_token0 ? 3 : 2;
    if (direction >= 0) {  // buys the asset with wETH
      u.swap_words[base_in] = vb;
      u.swap_words[asset_out] = va;
    } else {  // sells the asset for wETH
      u.swap_words[asset_in] = va;
      u.swap_words[base_out] = vb;
    }
    units.push_back(u);
  };

  detail::NormalSource source(spec.seed ^ 0x5deece66dULL);
  std::size_t trade_counter = 0;
  std::int64_t step = 3600 / static_cast<std::int64_t>(spec.trades_per_hour);
  for (std::size_t h = 0; h < hours; ++h) {
    std::int64_t hour_ts = spec.start_ts + static_cast<std::int64_t>(h) * 3600;
    for (std::size_t i = 0; i < spec.n_assets; ++i) {
      bool dormant_now = dormant_assets.count(i) &&
                         static_cast<double>(h) >= spec.dormant_days * 24.0;
      // jitter draws are consumed unconditionally so one asset going dormant
      // leaves every other series untouched
      for (std::size_t j = 0; j < spec.trades_per_hour; ++j) {
        double jit = source.normal();
        double volu = source.uniform01();
        if (dormant_now) continue;
        std::int64_t ts = hour_ts + 450 + static_cast<std::int64_t>(j) * step;
        double price = std::exp(logp[i][h] + 0.001 * jit);
        double volume = spec.liquidity_eth * 0.001 * (0.5 + volu);
        for (const auto& e : spec.events)
          if (e.asset_index == i && e.volume_factor != 1.0 && ts >= e.announcement_ts &&
              ts < e.announcement_ts + static_cast<std::int64_t>(e.volume_days * 86400.0))
            volume *= e.volume_factor;
        emit_trade(i, ts, price, volume, ++trade_counter % 2 == 0 ? 1 : -1);
      }
      if (h % 24 == 12 && !dormant_now) {
        // liquidity-provision touch: sync with no swap
        const PoolMeta& m = out.pools[i];
        detail::TxUnit u;
        u.block = block_of(hour_ts + 1800);
        u.asset_index = i;
        u.has_sync = true;
        double price = std::exp(logp[i][h]);
        U256 rb = detail::scaled_amount(spec.liquidity_eth * 1.001, m.base_decimals);
        U256 ra = detail::scaled_amount(spec.liquidity_eth * 1.001 / price, m.asset_decimals);
        u.sync_words[0] = m.base_is_token0 ? rb : ra;
        u.sync_words[1] = m.base_is_token0 ? ra : rb;
        units.push_back(u);
      }
    }
  }

  for (const auto& s : spec.spikes) {
    if (s.hour >= hours) throw SpecError("spike hour out of range");
    std::int64_t hour_ts = spec.start_ts + static_cast<std::int64_t>(s.hour) * 3600;
    for (int k = 0; k < 5; ++k) {
      std::int64_t ts = hour_ts + k * 30;  // blocks b, b+2, b+4, b+6, b+8
      double price = std::exp(logp[s.asset_index][s.hour]);
      if (k == 2) price *= s.factor;
      emit_trade(s.asset_index, ts, price, spec.liquidity_eth * 0.0005, k % 2 == 0 ? 1 : -1);
    }
  }

  if (spec.preseed_swap) {
    // swap in the very first block, before any sync exists
    const PoolMeta& m = out.pools[0];
    detail::TxUnit u;
    u.block = spec.genesis_block;
    u.asset_index = 0;
    u.has_swap = true;
    u.swap_words[m.base_is_token0 ? 0 : 1] = detail::scaled_amount(0.5, m.base_decimals);
    u.swap_words[m.base_is_token0 ? 3 : 2] = detail::scaled_amount(100.0, m.asset_decimals);
    units.push_back(u);
  }
  if (spec.orphan_swap && hours > 49) {
    const PoolMeta& m = out.pools[0];
    detail::TxUnit u;
    u.block = block_of(spec.start_ts + 48 * 3600 + 60);
    u.asset_index = 0;
    u.has_swap = true;
    u.swap_words[m.base_is_token0 ? 0 : 1] = detail::scaled_amount(0.25, m.base_decimals);
    u.swap_words[m.base_is_token0 ? 3 : 2] = detail::scaled_amount(50.0, m.asset_decimals);
    units.push_back(u);
  }
  if (spec.zero_swap && hours > 73) {
    detail::TxUnit u;
    u.block = block_of(spec.start_ts + 72 * 3600 + 90);
    u.asset_index = std::min<std::size_t>(1, spec.n_assets - 1);
    u.has_swap = true;  // all-zero words
    units.push_back(u);
  }

  std::stable_sort(units.begin(), units.end(),
                   [](const detail::TxUnit& a, const detail::TxUnit& b) {
                     if (a.block != b.block) return a.block < b.block;
                     return a.asset_index < b.asset_index;
                   });

  const std::string zero_topic(66, '0');
  std::uint64_t cur_block = 0;
  std::uint32_t tx_ix = 0, log_ix = 0;
  for (const auto& u : units) {
    if (u.block != cur_block) {
      cur_block = u.block;
      tx_ix = 0;
      log_ix = 0;
    }
    std::int64_t bts = spec.start_ts +
                       static_cast<std::int64_t>(u.block - spec.genesis_block) * spec.block_time;
    auto base_log = [&]() {
      RawLog log;
      log.pool_address = detail::fixture_pool_address(u.asset_index);
      log.block_number = u.block;
      log.block_timestamp = bts;
      log.tx_index = tx_ix;
      return log;
    };
    if (u.has_sync) {
      RawLog log = base_log();
      log.topics = {std::string(kSyncTopic)};
      log.data = encode_words({u.sync_words[0], u.sync_words[1]});
      log.log_index = log_ix++;
      out.logs.push_back(std::move(log));
    }
    if (u.has_swap) {
      RawLog log = base_log();
      log.topics = {std::string(kSwapTopic), "0x" + zero_topic.substr(0, 63) + "1",
                    "0x" + zero_topic.substr(0, 63) + "2"};
      log.data = encode_words({u.swap_words[0], u.swap_words[1], u.swap_words[2], u.swap_words[3]});
      log.log_index = log_ix++;
      out.logs.push_back(std::move(log));
    }
    ++tx_ix;
  }
  return out;
}

inline void write_fixture(const FixtureBundle& bundle, const std::string& dir) {
  std::filesystem::create_directories(dir);
  write_logs(dir + "/logs.jsonl", bundle.logs);
  write_pools(dir + "/pools.csv", bundle.pools);
  write_supplies(dir + "/supplies.csv", bundle.supplies);
  write_ethusd(dir + "/ethusd.csv", bundle.ethusd);
  write_events(dir + "/events.csv", bundle.events);
}

}  // namespace dexdid
