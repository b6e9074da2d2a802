#pragma once

#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "dexdid/errors.hpp"
#include "dexdid/textio.hpp"
#include "dexdid/timeutil.hpp"
#include "dexdid/types.hpp"

/*
 * On-disk formats. Raw event logs travel as JSON lines; everything tabular
 * (pool metadata, supplies, ETH/USD quotes, events, decoded trades, interval
 * series) is quoted-field CSV with a mandatory header. Readers throw
 * SchemaError with file:line context; writers emit doubles at 15 significant
 * digits and '\n' line endings so byte-level comparison is meaningful.
 */

namespace dexdid {

namespace detail {

inline std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw SchemaError(path + ": cannot open file for writing");
  return out;
}

template <typename T>
T json_field(const nlohmann::json& j, const char* key, const std::string& ctx) {
  auto it = j.find(key);
  if (it == j.end()) throw SchemaError(ctx + ": missing field '" + key + "'");
  try {
    return it->get<T>();
  } catch (const nlohmann::json::exception&) {
    throw SchemaError(ctx + ": field '" + key + "' has the wrong type");
  }
}

}  // namespace detail

// ---- raw logs (JSONL) ----

inline std::vector<RawLog> read_logs(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SchemaError(path + ": cannot open file");
  std::vector<RawLog> logs;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::string ctx = path + ":" + std::to_string(lineno);
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw SchemaError(ctx + ": invalid JSON: " + e.what());
    }
    RawLog log;
    log.pool_address = detail::json_field<std::string>(j, "pool_address", ctx);
    log.topics = detail::json_field<std::vector<std::string>>(j, "topics", ctx);
    log.data = detail::json_field<std::string>(j, "data", ctx);
    log.block_number = detail::json_field<std::uint64_t>(j, "block_number", ctx);
    log.block_timestamp = detail::json_field<std::int64_t>(j, "block_timestamp", ctx);
    log.tx_index = detail::json_field<std::uint32_t>(j, "tx_index", ctx);
    log.log_index = detail::json_field<std::uint32_t>(j, "log_index", ctx);
    if (log.topics.empty()) throw SchemaError(ctx + ": log has no topics");
    logs.push_back(std::move(log));
  }
  return logs;
}

inline void write_logs(const std::string& path, const std::vector<RawLog>& logs) {
  auto out = detail::open_out(path);
  for (const auto& log : logs) {
    nlohmann::ordered_json j;
    j["pool_address"] = log.pool_address;
    j["topics"] = log.topics;
    j["data"] = log.data;
    j["block_number"] = log.block_number;
    j["block_timestamp"] = log.block_timestamp;
    j["tx_index"] = log.tx_index;
    j["log_index"] = log.log_index;
    out << j.dump() << '\n';
  }
}

// ---- pool metadata ----

inline std::vector<PoolMeta> read_pools(const std::string& path) {
  auto t = read_csv(path);
  int c_addr = t.col("pool_address", path);
  int c_base = t.col("base_symbol", path);
  int c_asset = t.col("asset_symbol", path);
  int c_bd = t.col("base_decimals", path);
  int c_ad = t.col("asset_decimals", path);
  int c_b0 = t.col("base_is_token0", path);
  std::vector<PoolMeta> pools;
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    std::string ctx = path + ":" + std::to_string(i + 2);
    const auto& r = t.rows[i];
    PoolMeta m;
    m.pool_address = r[c_addr];
    m.base_symbol = r[c_base];
    m.asset_symbol = r[c_asset];
    m.base_decimals = static_cast<int>(parse_int(r[c_bd], ctx + " base_decimals"));
    m.asset_decimals = static_cast<int>(parse_int(r[c_ad], ctx + " asset_decimals"));
    if (r[c_b0] == "true" || r[c_b0] == "1") m.base_is_token0 = true;
    else if (r[c_b0] == "false" || r[c_b0] == "0") m.base_is_token0 = false;
    else throw SchemaError(ctx + ": base_is_token0 must be true/false");
    pools.push_back(std::move(m));
  }
  return pools;
}

inline void write_pools(const std::string& path, const std::vector<PoolMeta>& pools) {
  auto out = detail::open_out(path);
  out << "pool_address,base_symbol,asset_symbol,base_decimals,asset_decimals,base_is_token0\n";
  for (const auto& m : pools)
    out << m.pool_address << ',' << csv_escape(m.base_symbol) << ',' << csv_escape(m.asset_symbol)
        << ',' << m.base_decimals << ',' << m.asset_decimals << ','
        << (m.base_is_token0 ? "true" : "false") << '\n';
}

// ---- supply snapshots ----

inline std::vector<SupplySnapshot> read_supplies(const std::string& path) {
  auto t = read_csv(path);
  int c_asset = t.col("asset", path);
  int c_block = t.col("block", path);
  int c_supply = t.col("total_supply", path);
  std::vector<SupplySnapshot> out;
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    std::string ctx = path + ":" + std::to_string(i + 2);
    const auto& r = t.rows[i];
    SupplySnapshot s;
    s.asset = r[c_asset];
    s.block = static_cast<std::uint64_t>(parse_int(r[c_block], ctx + " block"));
    s.total_supply = parse_double(r[c_supply], ctx + " total_supply");
    out.push_back(std::move(s));
  }
  return out;
}

inline void write_supplies(const std::string& path, const std::vector<SupplySnapshot>& rows) {
  auto out = detail::open_out(path);
  out << "asset,block,total_supply\n";
  for (const auto& s : rows)
    out << csv_escape(s.asset) << ',' << s.block << ',' << fmt_num(s.total_supply) << '\n';
}

// ---- ETH/USD quotes ----

inline std::vector<EthUsdPoint> read_ethusd(const std::string& path) {
  auto t = read_csv(path);
  int c_ts = t.col("timestamp", path);
  int c_px = t.col("usd_per_eth", path);
  std::vector<EthUsdPoint> out;
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    std::string ctx = path + ":" + std::to_string(i + 2);
    const auto& r = t.rows[i];
    EthUsdPoint p;
    p.timestamp = parse_int(r[c_ts], ctx + " timestamp");
    p.usd_per_eth = parse_double(r[c_px], ctx + " usd_per_eth");
    out.push_back(p);
  }
  return out;
}

inline void write_ethusd(const std::string& path, const std::vector<EthUsdPoint>& rows) {
  auto out = detail::open_out(path);
  out << "timestamp,usd_per_eth\n";
  for (const auto& p : rows) out << p.timestamp << ',' << fmt_num(p.usd_per_eth) << '\n';
}

// ---- crime events ----

inline std::vector<CrimeEvent> read_events(const std::string& path) {
  auto t = read_csv(path);
  int c_id = t.col("id", path);
  int c_asset = t.col("asset", path);
  int c_ann = t.col("announcement", path);
  int c_desc = t.col("description", path);
  int c_loss = t.col("direct_loss_usd", path);
  std::vector<CrimeEvent> out;
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    std::string ctx = path + ":" + std::to_string(i + 2);
    const auto& r = t.rows[i];
    CrimeEvent e;
    e.id = static_cast<int>(parse_int(r[c_id], ctx + " id"));
    e.asset = r[c_asset];
    try {
      e.announcement_ts = parse_time_arg(r[c_ann]);
    } catch (const std::exception& ex) {
      throw SchemaError(ctx + " announcement: " + ex.what());
    }
    e.description = r[c_desc];
    if (!r[c_loss].empty()) e.direct_loss_usd = parse_double(r[c_loss], ctx + " direct_loss_usd");
    out.push_back(std::move(e));
  }
  return out;
}

inline void write_events(const std::string& path, const std::vector<CrimeEvent>& rows) {
  auto out = detail::open_out(path);
  out << "id,asset,announcement,description,direct_loss_usd\n";
  for (const auto& e : rows) {
    out << e.id << ',' << csv_escape(e.asset) << ',' << format_iso_date(e.announcement_ts) << ','
        << csv_escape(e.description) << ',';
    if (e.direct_loss_usd) out << fmt_num(*e.direct_loss_usd);
    out << '\n';
  }
}

// ---- decoded trades ----

inline std::vector<TradePoint> read_trades(const std::string& path) {
  auto t = read_csv(path);
  int c_asset = t.col("asset", path);
  int c_block = t.col("block", path);
  int c_ts = t.col("timestamp", path);
  int c_price = t.col("price", path);
  int c_vol = t.col("volume", path);
  int c_rb = t.col("reserve_base", path);
  int c_ra = t.col("reserve_asset", path);
  int c_tx = t.col("tx_index", path);
  int c_li = t.col("log_index", path);
  int c_dir = t.col("direction", path);
  std::vector<TradePoint> out;
  out.reserve(t.rows.size());
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    std::string ctx = path + ":" + std::to_string(i + 2);
    const auto& r = t.rows[i];
    TradePoint p;
    p.asset = r[c_asset];
    p.block = static_cast<std::uint64_t>(parse_int(r[c_block], ctx + " block"));
    p.timestamp = parse_int(r[c_ts], ctx + " timestamp");
    p.price = parse_double(r[c_price], ctx + " price");
    p.volume = parse_double(r[c_vol], ctx + " volume");
    p.reserves_base = parse_double(r[c_rb], ctx + " reserve_base");
    p.reserves_asset = parse_double(r[c_ra], ctx + " reserve_asset");
    p.tx_index = static_cast<std::uint32_t>(parse_int(r[c_tx], ctx + " tx_index"));
    p.log_index = static_cast<std::uint32_t>(parse_int(r[c_li], ctx + " log_index"));
    p.direction = static_cast<int>(parse_int(r[c_dir], ctx + " direction"));
    out.push_back(std::move(p));
  }
  return out;
}

inline void write_trades(const std::string& path, const std::vector<TradePoint>& trades) {
  auto out = detail::open_out(path);
  out << "asset,block,timestamp,price,volume,reserve_base,reserve_asset,tx_index,log_index,"
         "direction\n";
  for (const auto& p : trades)
    out << csv_escape(p.asset) << ',' << p.block << ',' << p.timestamp << ',' << fmt_num(p.price)
        << ',' << fmt_num(p.volume) << ',' << fmt_num(p.reserves_base) << ','
        << fmt_num(p.reserves_asset) << ',' << p.tx_index << ',' << p.log_index << ','
        << p.direction << '\n';
}

// ---- interval series ----

inline SeriesKind parse_kind(const std::string& s) {
  if (s == "price") return SeriesKind::price;
  if (s == "volume") return SeriesKind::volume;
  if (s == "cumulative_volume") return SeriesKind::cumulative_volume;
  throw SchemaError("unknown series kind '" + s + "'");
}

inline void write_series(const std::string& path, const std::vector<IntervalSeries>& series) {
  auto out = detail::open_out(path);
  out << "asset,kind,dt,origin,slot,value\n";
  for (const auto& s : series)
    for (const auto& [slot, v] : s.values)
      out << csv_escape(s.asset) << ',' << to_string(s.kind) << ',' << s.dt << ',' << s.origin
          << ',' << slot << ',' << fmt_num(v) << '\n';
}

inline std::vector<IntervalSeries> read_series(const std::string& path) {
  auto t = read_csv(path);
  int c_asset = t.col("asset", path);
  int c_kind = t.col("kind", path);
  int c_dt = t.col("dt", path);
  int c_origin = t.col("origin", path);
  int c_slot = t.col("slot", path);
  int c_value = t.col("value", path);
  std::vector<IntervalSeries> out;
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    std::string ctx = path + ":" + std::to_string(i + 2);
    const auto& r = t.rows[i];
    SeriesKind kind;
    try {
      kind = parse_kind(r[c_kind]);
    } catch (const SchemaError& e) {
      throw SchemaError(ctx + ": " + e.what());
    }
    std::int64_t dt = parse_int(r[c_dt], ctx + " dt");
    std::int64_t origin = parse_int(r[c_origin], ctx + " origin");
    if (out.empty() || out.back().asset != r[c_asset] || out.back().kind != kind) {
      IntervalSeries s;
      s.asset = r[c_asset];
      s.kind = kind;
      s.dt = dt;
      s.origin = origin;
      out.push_back(std::move(s));
    }
    auto& s = out.back();
    if (s.dt != dt || s.origin != origin)
      throw SchemaError(ctx + ": dt/origin change within one series");
    std::int64_t slot = parse_int(r[c_slot], ctx + " slot");
    if (!s.values.empty() && slot <= s.values.back().first)
      throw SchemaError(ctx + ": slot indices must be strictly increasing per series");
    s.values.emplace_back(slot, parse_double(r[c_value], ctx + " value"));
  }
  return out;
}

}  // namespace dexdid
