#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <tuple>
#include <filesystem>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>
#include <boost/math/distributions/students_t.hpp>

#include "dexdid/aggregate.hpp"
#include "dexdid/cleaning.hpp"
#include "dexdid/config.hpp"
#include "dexdid/counterfactual.hpp"
#include "dexdid/did.hpp"
#include "dexdid/errors.hpp"
#include "dexdid/impact.hpp"
#include "dexdid/ingest.hpp"
#include "dexdid/io.hpp"
#include "dexdid/textio.hpp"
#include "dexdid/timeutil.hpp"
#include "dexdid/types.hpp"

/*
 * End-to-end orchestration: ingest -> clean -> aggregate -> counterfactuals
 * -> panel fit -> impact accounting, per event, with a bounded worker pool.
 * Events that fail a stage precondition are carried through as aborted rows
 * with their reason; they never disappear from the report.
 *
 * All outputs are deterministic functions of inputs + configuration: work
 * items land in index-addressed slots regardless of scheduling, counters are
 * integers, and every float is serialized at 15 significant digits. The
 * manifest's data window comes from the input timestamps, not the wall
 * clock, so reruns are byte-identical.
 */

namespace dexdid {

inline constexpr const char* kToolVersion = "0.1.0";

// Index-addressed parallel map; rethrows the first worker exception.
template <typename Fn>
void parallel_for(std::size_t n, std::size_t workers, Fn&& fn) {
  if (workers <= 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr first_error;
  std::mutex error_mu;
  auto body = [&] {
    for (;;) {
      std::size_t i = next.fetch_add(1);
      if (i >= n || failed.load()) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mu);
        if (!first_error) first_error = std::current_exception();
        failed.store(true);
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  std::size_t n_threads = std::min(workers, n);
  pool.reserve(n_threads);
  for (std::size_t t = 0; t < n_threads; ++t) pool.emplace_back(body);
  for (auto& th : pool) th.join();
  if (first_error) std::rethrow_exception(first_error);
}

struct AssetData {
  PoolMeta meta;
  std::vector<TradePoint> points;  // cleaned
  OutlierReport outliers;
  IngestStats stats;
  bool mature = false;
};

struct EventOutcome {
  CrimeEvent event;
  std::string status = "aborted";  // "ok" | "aborted"
  std::string reason;
  std::string note;
  std::optional<ImpactReport> impact;
  std::optional<DiDFit> price_fit;
  std::optional<DiDFit> volume_fit;
  std::optional<CounterfactualSet> price_set;
  std::optional<CounterfactualSet> volume_set;
};

struct RunResult {
  std::vector<AssetData> assets;
  std::vector<EventOutcome> outcomes;  // input event order
  ImpactTotals total_row;
  std::map<std::string, std::uint64_t> row_counts;
  std::int64_t data_start_ts = 0;
  std::int64_t data_end_ts = 0;
};

namespace detail {

// Midnight UTC of the announcement's calendar day.
inline std::int64_t event_origin(std::int64_t announcement_ts) {
  return floor_div(announcement_ts, 86400) * 86400;
}

struct EventInputs {
  IntervalSeries price;
  IntervalSeries cumvol;
  StandardizedSeries price_z;
  StandardizedSeries cumvol_z;
};

}  // namespace detail

// Buckets logs by pool, sorted into canonical (block, tx, log) order.
// Rejects duplicate pool addresses and assets served by multiple pools.
inline std::vector<std::vector<RawLog>> group_logs_by_pool(const std::vector<RawLog>& logs,
                                                           const std::vector<PoolMeta>& pools,
                                                           std::uint64_t* unknown_pool = nullptr) {
  std::map<std::string, std::size_t> pool_ix;
  for (std::size_t i = 0; i < pools.size(); ++i) {
    if (pool_ix.count(pools[i].pool_address))
      throw SchemaError("duplicate pool address " + pools[i].pool_address);
    pool_ix[pools[i].pool_address] = i;
  }
  {
    std::map<std::string, int> asset_count;
    for (const auto& p : pools)
      if (++asset_count[p.asset_symbol] > 1)
        throw SchemaError("asset symbol " + p.asset_symbol + " appears in more than one pool");
  }
  std::vector<std::vector<RawLog>> per_pool(pools.size());
  std::uint64_t unknown = 0;
  for (const auto& log : logs) {
    auto it = pool_ix.find(log.pool_address);
    if (it == pool_ix.end()) {
      ++unknown;
      continue;
    }
    per_pool[it->second].push_back(log);
  }
  for (auto& bucket : per_pool)
    std::sort(bucket.begin(), bucket.end(), [](const RawLog& a, const RawLog& b) {
      return std::tuple{a.block_number, a.tx_index, a.log_index} <
             std::tuple{b.block_number, b.tx_index, b.log_index};
    });
  if (unknown_pool) *unknown_pool = unknown;
  return per_pool;
}

inline void ingest_and_clean(const PipelineConfig& cfg, const std::vector<RawLog>& logs,
                             const std::vector<PoolMeta>& pools, RunResult& result) {
  std::uint64_t unknown_pool = 0;
  auto per_pool = group_logs_by_pool(logs, pools, &unknown_pool);
  for (const auto& log : logs) {
    if (result.data_start_ts == 0 || log.block_timestamp < result.data_start_ts)
      result.data_start_ts = log.block_timestamp;
    if (log.block_timestamp > result.data_end_ts) result.data_end_ts = log.block_timestamp;
  }

  result.assets.resize(pools.size());
  parallel_for(pools.size(), cfg.workers, [&](std::size_t i) {
    const auto& logs_i = per_pool[i];
    AssetData data;
    data.meta = pools[i];
    auto raw_points = build_trade_series(logs_i, pools[i], cfg.orientation, &data.stats);
    auto [kept, report] = remove_spikes(raw_points, cfg.clean);
    data.points = std::move(kept);
    data.outliers = std::move(report);
    data.mature = maturity_check(data.points, cfg.maturity);
    result.assets[i] = std::move(data);
  });

  auto& counts = result.row_counts;
  counts["logs"] = logs.size();
  counts["logs_unknown_pool"] = unknown_pool;
  counts["pools"] = pools.size();
  for (const auto& a : result.assets) {
    counts["swaps"] += a.stats.swaps;
    counts["syncs"] += a.stats.syncs;
    counts["orphan_swaps"] += a.stats.orphan_swaps;
    counts["dropped_no_price"] += a.stats.dropped_no_price;
    counts["degenerate_syncs"] += a.stats.degenerate_syncs;
    counts["anomalous_swaps"] += a.stats.anomalous_swaps;
    counts["unknown_topics"] += a.stats.unknown_topics;
    counts["trades_kept"] += a.points.size();
    counts["trades_removed"] += a.outliers.removed_count;
  }
}

inline EventOutcome analyze_event(const PipelineConfig& cfg, const CrimeEvent& event,
                                  const std::vector<AssetData>& assets,
                                  const std::map<std::string, std::size_t>& asset_ix,
                                  const std::vector<CrimeEvent>& all_events,
                                  const std::vector<SupplySnapshot>& supplies,
                                  const std::vector<EthUsdPoint>& ethusd) {
  EventOutcome out;
  out.event = event;
  try {
    auto it = asset_ix.find(event.asset);
    if (it == asset_ix.end()) throw EventAborted("no pool for asset " + event.asset);
    const AssetData& treated = assets[it->second];
    if (!treated.mature) throw EventAborted("treated series immature");

    std::int64_t origin = detail::event_origin(event.announcement_ts);
    SlotRange full{cfg.long_slots().lo, cfg.event_slots().hi};
    SlotRange long_w = cfg.long_slots();
    SlotRange analysis = cfg.analysis_slots();

    PanelSpec price_spec;
    price_spec.event_id = event.id;
    price_spec.kind = SeriesKind::price;
    price_spec.analysis_span = analysis;
    price_spec.event_window = cfg.event_slots();
    price_spec.short_window = cfg.short_slots();
    price_spec.anchor_slot = cfg.anchor_slot();
    price_spec.dt = cfg.dt;
    PanelSpec vol_spec = price_spec;
    vol_spec.kind = SeriesKind::cumulative_volume;

    IntervalSeries treated_price;
    try {
      treated_price = aggregate_prices(treated.points, cfg.dt, origin, full);
    } catch (const EmptySeries&) {
      throw EventAborted("no trades inside the analysis window");
    }
    IntervalSeries treated_cumvol =
        cumulate(aggregate_volumes(treated.points, cfg.dt, origin, full));

    StandardizedSeries treated_price_z, treated_cumvol_z;
    try {
      treated_price_z = standardize(treated_price, long_w);
      treated_cumvol_z = standardize(treated_cumvol, long_w);
    } catch (const DegenerateSeries& e) {
      throw EventAborted(std::string("degenerate treated series in reference window: ") +
                         e.what());
    }

    // Candidate universe: other assets, mature, fully covering the analysis
    // span with prices. Optionally exclude assets treated by another event
    // whose announcement falls inside this event's data window.
    std::vector<StandardizedSeries> universe_price_z, universe_cumvol_z;
    std::vector<IntervalSeries> universe_price, universe_cumvol;
    for (const auto& cand : assets) {
      const std::string& sym = cand.meta.asset_symbol;
      if (sym == event.asset || !cand.mature) continue;
      if (cfg.exclude_treated) {
        bool hit = false;
        for (const auto& other : all_events) {
          if (other.id == event.id || other.asset != sym) continue;
          std::int64_t lo = slot_start(full.lo, origin, cfg.dt);
          std::int64_t hi = slot_start(full.hi, origin, cfg.dt);
          if (other.announcement_ts >= lo && other.announcement_ts < hi) hit = true;
        }
        if (hit) continue;
      }
      IntervalSeries price;
      try {
        price = aggregate_prices(cand.points, cfg.dt, origin, full);
      } catch (const EmptySeries&) {
        continue;
      }
      if (!price.covers(analysis)) continue;
      IntervalSeries cumvol = cumulate(aggregate_volumes(cand.points, cfg.dt, origin, full));
      try {
        universe_price_z.push_back(standardize(price, long_w));
        universe_cumvol_z.push_back(standardize(cumvol, long_w));
      } catch (const DegenerateSeries&) {
        continue;
      }
      universe_price.push_back(std::move(price));
      universe_cumvol.push_back(std::move(cumvol));
    }

    CounterfactualSet price_set;
    try {
      price_set = select(treated_price_z, universe_price_z, long_w, cfg.selection());
    } catch (const NoCounterfactuals& e) {
      throw EventAborted(std::string("no price counterfactuals: ") + e.what());
    }
    price_set.event_id = event.id;
    out.price_set = price_set;

    auto member_series = [](const CounterfactualSet& set,
                            const std::vector<IntervalSeries>& universe) {
      std::vector<IntervalSeries> members;
      for (const auto& m : set.members)
        for (const auto& s : universe)
          if (s.asset == m.candidate) members.push_back(s);
      return members;
    };

    Panel price_panel =
        build_panel(event.id, treated_price, member_series(price_set, universe_price), price_spec);
    DiDFit price_fit = fit_dynamic_did(price_panel, price_spec);
    out.price_fit = price_fit;
    EffectSummary price_effect = summarize_effect(price_fit, cfg.event_slots());

    std::optional<EffectSummary> volume_effect;
    try {
      auto volume_set = select(treated_cumvol_z, universe_cumvol_z, long_w, cfg.selection());
      volume_set.event_id = event.id;
      volume_set.kind = SeriesKind::cumulative_volume;
      out.volume_set = volume_set;
      Panel vol_panel = build_panel(event.id, treated_cumvol,
                                    member_series(volume_set, universe_cumvol), vol_spec);
      DiDFit vol_fit = fit_dynamic_did(vol_panel, vol_spec);
      out.volume_fit = vol_fit;
      volume_effect = summarize_effect(vol_fit, cfg.event_slots());
    } catch (const std::exception& e) {
      out.note = std::string("volume analysis skipped: ") + e.what();
    }

    // Pre-event capitalization at the anchor slot.
    auto anchor_price = treated_price.at(cfg.anchor_slot());
    if (!anchor_price) throw EventAborted("no price at the anchor slot");
    double price_eth = cfg.orientation == PriceOrientation::base_per_asset
                           ? *anchor_price
                           : 1.0 / *anchor_price;
    std::int64_t anchor_end = slot_start(cfg.anchor_slot() + 1, origin, cfg.dt);
    std::uint64_t anchor_block = 0;
    for (const auto& p : treated.points) {
      if (p.timestamp >= anchor_end) break;
      anchor_block = p.block;
    }
    double supply = supply_at(supplies, event.asset, anchor_block);
    double usd = ethusd_at(ethusd, slot_start(cfg.anchor_slot(), origin, cfg.dt));
    double cap = market_cap({supply, price_eth, usd});

    out.impact = make_report(event.id, event.asset, event.direct_loss_usd, cap, price_effect,
                             volume_effect);
    out.status = "ok";
  } catch (const EventAborted& e) {
    out.reason = e.what();
  } catch (const MissingSupply& e) {
    out.reason = e.what();
  } catch (const CollinearityError& e) {
    out.reason = std::string("collinear design: ") + e.what();
  } catch (const TooFewClusters& e) {
    out.reason = e.what();
  } catch (const EmptySeries& e) {
    out.reason = e.what();
  }
  return out;
}

inline RunResult run_all(const PipelineConfig& cfg) {
  cfg.validate();
  RunResult result;

  auto logs = read_logs(cfg.logs_path);
  auto pools = read_pools(cfg.pools_path);
  auto supplies = read_supplies(cfg.supplies_path);
  auto ethusd = read_ethusd(cfg.ethusd_path);
  auto events = read_events(cfg.events_path);
  result.row_counts["supplies"] = supplies.size();
  result.row_counts["ethusd_quotes"] = ethusd.size();
  result.row_counts["events"] = events.size();

  ingest_and_clean(cfg, logs, pools, result);

  std::map<std::string, std::size_t> asset_ix;
  for (std::size_t i = 0; i < result.assets.size(); ++i)
    asset_ix[result.assets[i].meta.asset_symbol] = i;

  result.outcomes.resize(events.size());
  parallel_for(events.size(), cfg.workers, [&](std::size_t i) {
    result.outcomes[i] =
        analyze_event(cfg, events[i], result.assets, asset_ix, events, supplies, ethusd);
  });

  std::vector<ImpactReport> rows;
  for (const auto& o : result.outcomes) {
    if (o.impact) rows.push_back(*o.impact);
    ++result.row_counts[o.status == "ok" ? "events_ok" : "events_aborted"];
  }
  result.total_row = totals(rows);
  return result;
}

// ---- output emission ----

namespace detail {

inline nlohmann::ordered_json effect_json(const std::optional<EffectSummary>& e) {
  nlohmann::ordered_json j;
  j["impact_pct"] = e ? nlohmann::ordered_json(round15(e->mean_effect * 100.0))
                      : nlohmann::ordered_json(nullptr);
  j["class"] = e ? nlohmann::ordered_json(e->cls) : nlohmann::ordered_json(nullptr);
  return j;
}

inline nlohmann::ordered_json opt_num(const std::optional<double>& v) {
  return v ? nlohmann::ordered_json(round15(*v)) : nlohmann::ordered_json(nullptr);
}

inline nlohmann::ordered_json set_json(const std::optional<CounterfactualSet>& set) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  if (set)
    for (const auto& m : set->members) {
      nlohmann::ordered_json j;
      j["asset"] = m.candidate;
      j["r"] = round15(m.r);
      j["overlap"] = m.overlap_points;
      arr.push_back(std::move(j));
    }
  return arr;
}

}  // namespace detail

inline nlohmann::ordered_json report_json(const PipelineConfig& cfg, const RunResult& result) {
  nlohmann::ordered_json root;
  root["version"] = kToolVersion;
  root["config_hash"] = cfg.config_hash();
  nlohmann::ordered_json events = nlohmann::ordered_json::array();
  for (const auto& o : result.outcomes) {
    nlohmann::ordered_json j;
    j["event_id"] = o.event.id;
    j["asset"] = o.event.asset;
    j["announcement"] = format_iso_date(o.event.announcement_ts);
    j["description"] = o.event.description;
    j["status"] = o.status;
    if (o.status != "ok") j["reason"] = o.reason;
    if (!o.note.empty()) j["note"] = o.note;
    j["direct_loss_usd"] = detail::opt_num(o.event.direct_loss_usd);
    if (o.impact) {
      j["market_cap_usd"] = round15(o.impact->market_cap_usd);
      j["price"] = detail::effect_json(o.impact->price_effect);
      j["volume"] = detail::effect_json(o.impact->volume_effect);
      j["indirect_loss_usd"] = detail::opt_num(o.impact->indirect_loss_usd);
      j["indirect_share_pct"] = detail::opt_num(o.impact->indirect_share_pct);
      j["total_loss_usd"] = detail::opt_num(o.impact->total_loss_usd);
      j["counterfactuals_price"] = detail::set_json(o.price_set);
      j["counterfactuals_volume"] = detail::set_json(o.volume_set);
    }
    events.push_back(std::move(j));
  }
  root["events"] = std::move(events);
  nlohmann::ordered_json t;
  t["direct_usd"] = round15(result.total_row.direct_usd);
  t["indirect_usd"] = round15(result.total_row.indirect_usd);
  t["total_usd"] = round15(result.total_row.total_usd);
  t["indirect_share_pct"] = detail::opt_num(result.total_row.indirect_share_pct);
  root["totals"] = std::move(t);
  return root;
}

inline void write_impact_table(const std::string& path, const RunResult& result) {
  auto out = detail::open_out(path);
  out << "event_id,asset,announcement,status,direct_loss_usd,market_cap_usd,price_impact_pct,"
         "price_class,volume_impact_pct,volume_class,indirect_loss_usd,indirect_share_pct,"
         "total_loss_usd\n";
  auto opt = [](const std::optional<double>& v) { return v ? fmt_num(*v) : std::string{}; };
  for (const auto& o : result.outcomes) {
    out << o.event.id << ',' << csv_escape(o.event.asset) << ','
        << format_iso_date(o.event.announcement_ts) << ',' << o.status << ','
        << opt(o.event.direct_loss_usd) << ',';
    if (o.impact) {
      const auto& r = *o.impact;
      out << fmt_num(r.market_cap_usd) << ',';
      if (r.price_effect) out << fmt_num(r.price_effect->mean_effect * 100.0) << ',' << r.price_effect->cls << ',';
      else out << ",,";
      if (r.volume_effect) out << fmt_num(r.volume_effect->mean_effect * 100.0) << ',' << r.volume_effect->cls << ',';
      else out << ",,";
      out << opt(r.indirect_loss_usd) << ',' << opt(r.indirect_share_pct) << ','
          << opt(r.total_loss_usd);
    } else {
      out << ",,,,,,,";
    }
    out << '\n';
  }
  const auto& t = result.total_row;
  out << "TOTAL,,,," << fmt_num(t.direct_usd) << ",,,,,," << fmt_num(t.indirect_usd) << ','
      << opt(t.indirect_share_pct) << ',' << fmt_num(t.total_usd) << '\n';
}

// Per-slot coefficient rows with 90% confidence bounds; the anchor slot
// carries no coefficient and is simply absent.
inline void write_coeff_plot(const std::string& path, const DiDFit& fit, double p_threshold) {
  auto out = detail::open_out(path);
  out << "slot,estimate,lo90,hi90,p_value,significant\n";
  boost::math::students_t dist(static_cast<double>(fit.dof));
  double t_crit = boost::math::quantile(dist, 0.95);
  for (const auto& [slot, g] : fit.gamma) {
    double half = t_crit * g.se;
    out << slot << ',' << fmt_num(g.estimate) << ',' << fmt_num(g.estimate - half) << ','
        << fmt_num(g.estimate + half) << ',' << fmt_num(g.p_value) << ','
        << (g.p_value < p_threshold ? 1 : 0) << '\n';
  }
}

inline void write_heatmap(const std::string& path, const RunResult& result) {
  auto out = detail::open_out(path);
  out << "event_id,kind,slot,estimate,class\n";
  for (const auto& o : result.outcomes) {
    auto emit = [&](const std::optional<DiDFit>& fit) {
      if (!fit) return;
      for (const auto& [slot, g] : fit->gamma)
        out << o.event.id << ',' << to_string(fit->kind) << ',' << slot << ','
            << fmt_num(g.estimate) << ',' << classify(g.p_value) << '\n';
    };
    emit(o.price_fit);
    emit(o.volume_fit);
  }
}

inline void write_correlation_plot(const std::string& path, const CounterfactualSet& set) {
  auto out = detail::open_out(path);
  out << "asset,r,overlap\n";
  for (const auto& m : set.members)
    out << csv_escape(m.candidate) << ',' << fmt_num(m.r) << ',' << m.overlap_points << '\n';
}

inline void write_sweep_table(const std::string& path, const std::vector<SweepRow>& rows) {
  auto out = detail::open_out(path);
  out << "t_r,min_count,mean_count,mean_corr\n";
  for (const auto& r : rows) {
    out << fmt_num(r.t_r) << ',' << r.min_members << ',' << fmt_num(r.mean_members) << ',';
    if (std::isnan(r.mean_r)) out << "";
    else out << fmt_num(r.mean_r);
    out << '\n';
  }
}

// Writes every run-all artifact and the manifest; returns the output paths.
inline std::vector<std::string> emit_outputs(const PipelineConfig& cfg, const RunResult& result) {
  namespace fs = std::filesystem;
  fs::create_directories(cfg.out_dir);
  fs::create_directories(cfg.out_dir + "/plots");
  std::vector<std::string> outputs;

  {
    std::string path = cfg.out_dir + "/report.json";
    auto out = detail::open_out(path);
    out << report_json(cfg, result).dump(2) << '\n';
    outputs.push_back(path);
  }
  {
    std::string path = cfg.out_dir + "/impact_table.csv";
    write_impact_table(path, result);
    outputs.push_back(path);
  }
  for (const auto& o : result.outcomes) {
    std::string stem = cfg.out_dir + "/plots/coeffs_e" + std::to_string(o.event.id);
    if (o.price_fit) {
      write_coeff_plot(stem + "_price.csv", *o.price_fit, cfg.p_threshold);
      outputs.push_back(stem + "_price.csv");
    }
    if (o.volume_fit) {
      write_coeff_plot(stem + "_volume.csv", *o.volume_fit, cfg.p_threshold);
      outputs.push_back(stem + "_volume.csv");
    }
    std::string cstem = cfg.out_dir + "/plots/correlations_e" + std::to_string(o.event.id);
    if (o.price_set) {
      write_correlation_plot(cstem + "_price.csv", *o.price_set);
      outputs.push_back(cstem + "_price.csv");
    }
    if (o.volume_set) {
      write_correlation_plot(cstem + "_volume.csv", *o.volume_set);
      outputs.push_back(cstem + "_volume.csv");
    }
  }
  {
    std::string path = cfg.out_dir + "/plots/heatmap.csv";
    write_heatmap(path, result);
    outputs.push_back(path);
  }

  // manifest last: it digests the outputs above
  nlohmann::json manifest;  // plain json = sorted keys
  manifest["version"] = kToolVersion;
  manifest["config_hash"] = cfg.config_hash();
  nlohmann::json inputs;
  for (const auto& p :
       {cfg.logs_path, cfg.pools_path, cfg.supplies_path, cfg.ethusd_path, cfg.events_path})
    inputs[p] = hex64(fnv1a_file(p));
  manifest["inputs"] = std::move(inputs);
  manifest["row_counts"] = result.row_counts;
  manifest["data_window"] = {{"start_ts", result.data_start_ts}, {"end_ts", result.data_end_ts}};
  nlohmann::json out_digests;
  std::vector<std::string> sorted_outputs = outputs;
  std::sort(sorted_outputs.begin(), sorted_outputs.end());
  std::uint64_t combined = 1469598103934665603ULL;
  for (const auto& p : sorted_outputs) {
    std::uint64_t d = fnv1a_file(p);
    out_digests[fs::path(p).lexically_relative(cfg.out_dir).generic_string()] = hex64(d);
    auto h = hex64(d);
    combined = fnv1a(h.data(), h.size(), combined);
  }
  manifest["outputs"] = std::move(out_digests);
  manifest["output_digest"] = hex64(combined);
  {
    std::string path = cfg.out_dir + "/manifest.json";
    auto out = detail::open_out(path);
    out << manifest.dump(2) << '\n';
    outputs.push_back(path);
  }
  return outputs;
}

}  // namespace dexdid
