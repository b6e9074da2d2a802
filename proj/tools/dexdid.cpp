#include <cstdlib>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dexdid/config.hpp"
#include "dexdid/fixture.hpp"
#include "dexdid/io.hpp"
#include "dexdid/matchlink.hpp"
#include "dexdid/pipeline.hpp"
#include "dexdid/synth.hpp"

/*
 * dexdid: reconstruct AMM price/volume series from event logs and estimate
 * announcement effects against correlation-matched counterfactuals.
 *
 * Exit codes: 0 ok, 2 input/schema error, 3 analysis error (a stage
 * precondition failed on otherwise valid inputs).
 */

namespace {

using namespace dexdid;

PipelineConfig make_config(const std::string& config_flag, const std::vector<std::string>& sets) {
  PipelineConfig cfg;
  std::string path = config_flag;
  if (path.empty())
    if (const char* env = std::getenv("DEXDID_CONFIG")) path = env;
  if (!path.empty()) load_config_file(cfg, path);
  for (const auto& kv : sets) {
    auto eq = kv.find('=');
    if (eq == std::string::npos) throw SpecError("--set expects key=value, got '" + kv + "'");
    apply_config_key(cfg, detail::trim(kv.substr(0, eq)), detail::trim(kv.substr(eq + 1)),
                     "--set " + kv);
  }
  return cfg;
}

template <typename Fn>
int guarded(Fn&& fn) {
  auto fail = [](const char* what, int code) {
    std::cerr << "error: " << what << "\n";
    return code;
  };
  try {
    return fn();
  } catch (const EventAborted& e) {
    return fail(e.what(), 3);
  } catch (const NoCounterfactuals& e) {
    return fail(e.what(), 3);
  } catch (const InsufficientOverlap& e) {
    return fail(e.what(), 3);
  } catch (const DegenerateSeries& e) {
    return fail(e.what(), 3);
  } catch (const EmptySeries& e) {
    return fail(e.what(), 3);
  } catch (const CannotNormalize& e) {
    return fail(e.what(), 3);
  } catch (const CollinearityError& e) {
    return fail(e.what(), 3);
  } catch (const TooFewClusters& e) {
    return fail(e.what(), 3);
  } catch (const MissingSupply& e) {
    return fail(e.what(), 3);
  } catch (const WindowTooLong& e) {
    return fail(e.what(), 3);
  } catch (const DegenerateReserve& e) {
    return fail(e.what(), 3);
  } catch (const std::exception& e) {
    return fail(e.what(), 2);
  }
}

// Trades grouped by asset in first-appearance order.
std::vector<std::pair<std::string, std::vector<TradePoint>>> group_trades(
    const std::vector<TradePoint>& trades) {
  std::vector<std::pair<std::string, std::vector<TradePoint>>> groups;
  std::map<std::string, std::size_t> ix;
  for (const auto& t : trades) {
    auto it = ix.find(t.asset);
    if (it == ix.end()) {
      ix[t.asset] = groups.size();
      groups.push_back({t.asset, {}});
      it = ix.find(t.asset);
    }
    groups[it->second].second.push_back(t);
  }
  return groups;
}

const CrimeEvent& find_event(const std::vector<CrimeEvent>& events, int id) {
  for (const auto& e : events)
    if (e.id == id) return e;
  throw SchemaError("no event with id " + std::to_string(id));
}

const IntervalSeries* find_series(const std::vector<IntervalSeries>& all, const std::string& asset,
                                  SeriesKind kind) {
  for (const auto& s : all)
    if (s.asset == asset && s.kind == kind) return &s;
  return nullptr;
}

PanelSpec make_panel_spec(const PipelineConfig& cfg, int event_id, SeriesKind kind) {
  PanelSpec spec;
  spec.event_id = event_id;
  spec.kind = kind;
  spec.analysis_span = cfg.analysis_slots();
  spec.event_window = cfg.event_slots();
  spec.short_window = cfg.short_slots();
  spec.anchor_slot = cfg.anchor_slot();
  spec.dt = cfg.dt;
  return spec;
}

int cmd_ingest(const PipelineConfig& cfg, const std::string& out_path) {
  auto logs = read_logs(cfg.logs_path);
  auto pools = read_pools(cfg.pools_path);
  std::uint64_t unknown_pool = 0;
  auto per_pool = group_logs_by_pool(logs, pools, &unknown_pool);
  std::vector<TradePoint> trades;
  IngestStats total;
  for (std::size_t i = 0; i < pools.size(); ++i) {
    IngestStats stats;
    auto points = build_trade_series(per_pool[i], pools[i], cfg.orientation, &stats);
    trades.insert(trades.end(), points.begin(), points.end());
    total.swaps += stats.swaps;
    total.syncs += stats.syncs;
    total.orphan_swaps += stats.orphan_swaps;
    total.dropped_no_price += stats.dropped_no_price;
    total.degenerate_syncs += stats.degenerate_syncs;
    total.anomalous_swaps += stats.anomalous_swaps;
    total.unknown_topics += stats.unknown_topics;
  }
  write_trades(out_path, trades);
  std::cout << "pools=" << pools.size() << " trades=" << trades.size() << " swaps=" << total.swaps
            << " syncs=" << total.syncs << " orphan_swaps=" << total.orphan_swaps
            << " dropped_no_price=" << total.dropped_no_price
            << " degenerate_syncs=" << total.degenerate_syncs
            << " anomalous_swaps=" << total.anomalous_swaps
            << " unknown_topics=" << total.unknown_topics << " unknown_pool=" << unknown_pool
            << "\n";
  return 0;
}

int cmd_clean(const PipelineConfig& cfg, const std::string& in_path, const std::string& out_path) {
  auto trades = read_trades(in_path);
  std::vector<TradePoint> kept_all;
  for (auto& [asset, points] : group_trades(trades)) {
    auto [kept, report] = remove_spikes(points, cfg.clean);
    std::cout << asset << ": removed " << report.removed_count << " of " << report.total_count
              << " (flagged " << report.flagged_global.size() << ")\n";
    kept_all.insert(kept_all.end(), kept.begin(), kept.end());
  }
  write_trades(out_path, kept_all);
  return 0;
}

int cmd_aggregate(const PipelineConfig& cfg, const std::string& trades_path, int event_id,
                  const std::string& out_path) {
  auto trades = read_trades(trades_path);
  auto events = read_events(cfg.events_path);
  const auto& event = find_event(events, event_id);
  std::int64_t origin = detail::event_origin(event.announcement_ts);
  SlotRange full{cfg.long_slots().lo, cfg.event_slots().hi};
  std::vector<IntervalSeries> out;
  std::size_t assets = 0;
  for (auto& [asset, points] : group_trades(trades)) {
    IntervalSeries price;
    try {
      price = aggregate_prices(points, cfg.dt, origin, full);
    } catch (const EmptySeries&) {
      continue;
    }
    auto volume = aggregate_volumes(points, cfg.dt, origin, full);
    auto cumvol = cumulate(volume);
    out.push_back(std::move(price));
    out.push_back(std::move(volume));
    out.push_back(std::move(cumvol));
    ++assets;
  }
  write_series(out_path, out);
  std::cout << "wrote " << out.size() << " series for " << assets << " assets (origin " << origin
            << ", slots [" << full.lo << "," << full.hi << "))\n";
  return 0;
}

int cmd_match(const PipelineConfig& cfg, const std::string& actors_path,
              const std::string& tokens_path, const std::string& out_path) {
  auto actors_csv = read_csv(actors_path);
  std::size_t actor_col = actors_csv.col("actor", actors_path);
  std::vector<std::string> actors;
  for (const auto& row : actors_csv.rows) actors.push_back(row[actor_col]);
  auto tokens_csv = read_csv(tokens_path);
  std::size_t id_col = tokens_csv.col("token_id", tokens_path);
  std::size_t name_col = tokens_csv.col("token_name", tokens_path);
  std::vector<TokenEntry> tokens;
  for (const auto& row : tokens_csv.rows) tokens.push_back({row[id_col], row[name_col]});

  auto results = match_actors(actors, tokens, cfg.keywords, MatchThresholds{});
  auto out = detail::open_out(out_path);
  out << "actor,token_id,token_name,score_id,score_name,matched,rule\n";
  std::size_t matched = 0;
  for (const auto& m : results) {
    out << csv_escape(m.actor) << ',' << csv_escape(m.token_id) << ',' << csv_escape(m.token_name)
        << ',' << fmt_num(m.score_id) << ',' << fmt_num(m.score_name) << ','
        << (m.matched ? 1 : 0) << ',' << m.rule << '\n';
    if (m.matched) ++matched;
  }
  std::cout << "matched " << matched << " of " << results.size() << " actor-token pairs\n";
  return 0;
}

// Standardized series for one kind, target split from candidate pool.
struct ZUniverse {
  StandardizedSeries target;
  std::vector<StandardizedSeries> candidates;
};

ZUniverse standardize_universe(const PipelineConfig& cfg, const std::vector<IntervalSeries>& all,
                               const std::string& treated_asset, SeriesKind kind) {
  ZUniverse z;
  bool have_target = false;
  for (const auto& s : all) {
    if (s.kind != kind) continue;
    if (s.asset == treated_asset) {
      z.target = standardize(s, cfg.long_slots());
      have_target = true;
    } else {
      try {
        z.candidates.push_back(standardize(s, cfg.long_slots()));
      } catch (const DegenerateSeries&) {
      }
    }
  }
  if (!have_target)
    throw EventAborted("no " + std::string(to_string(kind)) + " series for treated asset " +
                       treated_asset);
  return z;
}

int cmd_counterfactuals(const PipelineConfig& cfg, const std::string& series_path, int event_id,
                        const std::string& kind_str, const std::string& out_path) {
  auto all = read_series(series_path);
  auto events = read_events(cfg.events_path);
  const auto& event = find_event(events, event_id);
  SeriesKind kind = parse_kind(kind_str);
  auto z = standardize_universe(cfg, all, event.asset, kind);

  std::vector<CorrelationResult> corrs;
  for (const auto& cand : z.candidates) {
    try {
      corrs.push_back(correlate(z.target, cand, cfg.long_slots(), cfg.min_overlap));
    } catch (const InsufficientOverlap&) {
    } catch (const DegenerateSeries&) {
    }
  }
  auto set = select_from_correlations(corrs, cfg.selection());
  std::sort(corrs.begin(), corrs.end(), [](const CorrelationResult& a, const CorrelationResult& b) {
    return a.r != b.r ? a.r > b.r : a.candidate < b.candidate;
  });
  std::map<std::string, bool> selected;
  for (const auto& m : set.members) selected[m.candidate] = true;

  auto out = detail::open_out(out_path);
  out << "asset,r,overlap,selected\n";
  for (const auto& c : corrs)
    out << csv_escape(c.candidate) << ',' << fmt_num(c.r) << ',' << c.overlap_points << ','
        << (selected.count(c.candidate) ? 1 : 0) << '\n';
  std::cout << "event " << event_id << " " << kind_str << ": stage sizes " << set.stage1_size
            << " > " << set.stage2_size << " > " << set.stage3_size << "\n";
  return 0;
}

int cmd_did(const PipelineConfig& cfg, const std::string& series_path, int event_id,
            const std::string& kind_str, const std::string& cf_path, const std::string& out_path) {
  auto all = read_series(series_path);
  auto events = read_events(cfg.events_path);
  const auto& event = find_event(events, event_id);
  SeriesKind kind = parse_kind(kind_str);

  auto cf = read_csv(cf_path);
  std::size_t asset_col = cf.col("asset", cf_path);
  std::size_t sel_col = cf.col("selected", cf_path);
  std::vector<std::string> members;
  for (const auto& row : cf.rows)
    if (row[sel_col] == "1") members.push_back(row[asset_col]);

  const IntervalSeries* treated = find_series(all, event.asset, kind);
  if (!treated) throw EventAborted("no " + kind_str + " series for treated asset " + event.asset);
  std::vector<IntervalSeries> controls;
  for (const auto& m : members) {
    const IntervalSeries* s = find_series(all, m, kind);
    if (!s) throw SchemaError("counterfactual asset " + m + " missing from series file");
    controls.push_back(*s);
  }

  PanelSpec spec = make_panel_spec(cfg, event_id, kind);
  Panel panel = build_panel(event_id, *treated, controls, spec);
  DiDFit fit = fit_dynamic_did(panel, spec);
  write_coeff_plot(out_path, fit, cfg.p_threshold);
  EffectSummary effect = summarize_effect(fit, cfg.event_slots());
  std::cout << "event " << event_id << " " << kind_str << ": mean effect over event window "
            << fmt_num(effect.mean_effect * 100.0) << "% (" << effect.cls << "), clusters "
            << fit.n_clusters << ", obs " << fit.n_obs << "\n";
  return 0;
}

int print_outcomes(const RunResult& result) {
  for (const auto& o : result.outcomes) {
    std::cout << "e" << o.event.id << " " << o.event.asset << " " << o.status;
    if (o.status == "ok" && o.impact) {
      const auto& r = *o.impact;
      if (r.price_effect)
        std::cout << " price " << fmt_num(r.price_effect->mean_effect * 100.0) << "% ("
                  << r.price_effect->cls << ")";
      if (r.volume_effect)
        std::cout << " volume " << fmt_num(r.volume_effect->mean_effect * 100.0) << "% ("
                  << r.volume_effect->cls << ")";
      if (r.indirect_loss_usd) std::cout << " indirect " << fmt_num(*r.indirect_loss_usd);
    } else {
      std::cout << " (" << o.reason << ")";
    }
    std::cout << "\n";
  }
  std::vector<std::string> aborted;
  for (const auto& o : result.outcomes)
    if (o.status != "ok")
      aborted.push_back("e" + std::to_string(o.event.id) + " (" + o.reason + ")");
  if (!aborted.empty()) {
    std::cerr << "aborted events:";
    for (const auto& a : aborted) std::cerr << " " << a;
    std::cerr << "\n";
    return 3;
  }
  return 0;
}

int cmd_impact(const PipelineConfig& cfg) {
  RunResult result = run_all(cfg);
  std::filesystem::create_directories(cfg.out_dir);
  write_impact_table(cfg.out_dir + "/impact_table.csv", result);
  int rc = print_outcomes(result);
  std::cout << "total direct " << fmt_num(result.total_row.direct_usd) << " indirect "
            << fmt_num(result.total_row.indirect_usd) << " total "
            << fmt_num(result.total_row.total_usd) << "\n";
  std::cout << "wrote " << cfg.out_dir << "/impact_table.csv\n";
  return rc;
}

int cmd_sweep(const PipelineConfig& cfg, const std::string& grid_str, const std::string& out_path) {
  auto logs = read_logs(cfg.logs_path);
  auto pools = read_pools(cfg.pools_path);
  auto events = read_events(cfg.events_path);
  RunResult staged;
  ingest_and_clean(cfg, logs, pools, staged);

  std::vector<std::vector<CorrelationResult>> per_event;
  for (const auto& event : events) {
    const AssetData* treated = nullptr;
    for (const auto& a : staged.assets)
      if (a.meta.asset_symbol == event.asset) treated = &a;
    if (!treated || !treated->mature) {
      std::cerr << "e" << event.id << ": skipped (immature or missing)\n";
      continue;
    }
    std::int64_t origin = detail::event_origin(event.announcement_ts);
    SlotRange full{cfg.long_slots().lo, cfg.event_slots().hi};
    StandardizedSeries target;
    try {
      target = standardize(aggregate_prices(treated->points, cfg.dt, origin, full),
                           cfg.long_slots());
    } catch (const std::exception& e) {
      std::cerr << "e" << event.id << ": skipped (" << e.what() << ")\n";
      continue;
    }
    std::vector<CorrelationResult> corrs;
    for (const auto& cand : staged.assets) {
      if (cand.meta.asset_symbol == event.asset || !cand.mature) continue;
      try {
        auto cand_z = standardize(aggregate_prices(cand.points, cfg.dt, origin, full),
                                  cfg.long_slots());
        corrs.push_back(correlate(target, cand_z, cfg.long_slots(), cfg.min_overlap));
      } catch (const std::exception&) {
        continue;
      }
    }
    per_event.push_back(std::move(corrs));
  }
  if (per_event.empty()) throw EventAborted("no event produced a correlation set");

  std::vector<double> grid;
  for (const auto& item : detail::parse_list(grid_str))
    grid.push_back(parse_double(item, "--grid"));
  auto rows = sweep_thresholds(per_event, cfg.selection(), grid);
  write_sweep_table(out_path, rows);
  for (const auto& r : rows)
    std::cout << "t_r=" << fmt_num(r.t_r) << " min=" << r.min_members
              << " mean=" << fmt_num(r.mean_members)
              << " mean_r=" << (std::isnan(r.mean_r) ? std::string("-") : fmt_num(r.mean_r))
              << "\n";
  return 0;
}

struct SynthFlags {
  std::string fixture_spec;
  std::string out = "synth_out";
  std::size_t n_assets = 2;
  std::int64_t n_slots = 100;
  double sigma = 0.01;
  double corr = 0.0;
  double drift = 0.0;
  double initial_price = 100.0;
  double effect_magnitude = 0.0;
  std::int64_t effect_onset = 0;
  std::string effect_shape = "step";
  std::size_t effect_asset = 0;
};

int cmd_synth(const PipelineConfig& cfg, const SynthFlags& flags) {
  if (!flags.fixture_spec.empty()) {
    auto spec = parse_fixture_spec(flags.fixture_spec);
    auto bundle = generate_fixture(spec);
    write_fixture(bundle, flags.out);
    std::cout << "fixture: logs=" << bundle.logs.size() << " pools=" << bundle.pools.size()
              << " supplies=" << bundle.supplies.size() << " ethusd=" << bundle.ethusd.size()
              << " events=" << bundle.events.size() << " -> " << flags.out << "\n";
    return 0;
  }
  SynthSpec spec;
  spec.n_assets = flags.n_assets;
  spec.n_slots = flags.n_slots;
  spec.per_slot_sigma = flags.sigma;
  spec.pairwise_corr = flags.corr;
  spec.drift = flags.drift;
  spec.seed = cfg.seed;
  spec.dt = cfg.dt;
  spec.initial_price = flags.initial_price;
  auto series = generate(spec);
  if (flags.effect_magnitude != 0.0) {
    if (flags.effect_asset >= series.size())
      throw SpecError("effect asset index out of range");
    EffectShape shape;
    if (flags.effect_shape == "step") shape = EffectShape::step;
    else if (flags.effect_shape == "spike") shape = EffectShape::spike;
    else if (flags.effect_shape == "decay") shape = EffectShape::decay;
    else throw SpecError("unknown effect shape '" + flags.effect_shape + "'");
    series[flags.effect_asset] =
        inject(series[flags.effect_asset], {flags.effect_onset, flags.effect_magnitude, shape});
  }
  write_series(flags.out, series);
  std::cout << "wrote " << series.size() << " series x " << flags.n_slots << " slots to "
            << flags.out << "\n";
  return 0;
}

int cmd_run_all(const PipelineConfig& cfg) {
  RunResult result = run_all(cfg);
  auto outputs = emit_outputs(cfg, result);
  int rc = print_outcomes(result);
  std::cout << "wrote " << outputs.size() << " files under " << cfg.out_dir << "\n";
  return rc;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"AMM event-log analytics: price reconstruction, outlier cleaning, counterfactual "
               "difference-in-differences, impact accounting"};
  app.require_subcommand(1);

  std::string config_path;
  std::vector<std::string> sets;
  std::size_t workers = 0;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "config file (default: $DEXDID_CONFIG)");
    sub->add_option("--set", sets, "override a config key, e.g. --set params.t_r=0.5");
    sub->add_option("--workers", workers, "worker thread count");
  };

  std::string logs, pools, supplies, ethusd, events, out, trades, series, cf, kind = "price";
  std::string actors, tokens, grid = "0,0.1,0.2,0.3,0.4,0.5,0.6,0.7,0.8,0.9";
  int event_id = 0;
  std::uint64_t seed_flag = 0;
  SynthFlags synth_flags;

  auto* c_ingest = app.add_subcommand("ingest", "decode sync/swap logs into a trade series");
  add_common(c_ingest);
  c_ingest->add_option("--logs", logs, "JSONL event log dump");
  c_ingest->add_option("--pools", pools, "pool metadata CSV");
  c_ingest->add_option("--out", out, "output trades CSV")->required();

  auto* c_clean = app.add_subcommand("clean", "remove confirmed price spikes from a trade series");
  add_common(c_clean);
  c_clean->add_option("--trades", trades, "input trades CSV")->required();
  c_clean->add_option("--out", out, "output trades CSV")->required();

  auto* c_agg = app.add_subcommand("aggregate",
                                   "aggregate trades into fixed-interval series around one event");
  add_common(c_agg);
  c_agg->add_option("--trades", trades, "input trades CSV")->required();
  c_agg->add_option("--events", events, "events CSV");
  c_agg->add_option("--event-id", event_id, "event id fixing the clock origin")->required();
  c_agg->add_option("--out", out, "output series CSV")->required();

  auto* c_match = app.add_subcommand("match", "link actor names to traded tokens");
  add_common(c_match);
  c_match->add_option("--actors", actors, "CSV with an 'actor' column")->required();
  c_match->add_option("--tokens", tokens, "CSV with token_id,token_name")->required();
  c_match->add_option("--out", out, "output CSV")->required();

  auto* c_cf = app.add_subcommand("counterfactuals",
                                  "select counterfactual assets by reference-window correlation");
  add_common(c_cf);
  c_cf->add_option("--series", series, "series CSV from `aggregate`")->required();
  c_cf->add_option("--events", events, "events CSV");
  c_cf->add_option("--event-id", event_id, "event id")->required();
  c_cf->add_option("--kind", kind, "price | volume | cumulative_volume");
  c_cf->add_option("--out", out, "output CSV")->required();

  auto* c_did = app.add_subcommand("did", "fit the dynamic panel estimator for one event");
  add_common(c_did);
  c_did->add_option("--series", series, "series CSV from `aggregate`")->required();
  c_did->add_option("--events", events, "events CSV");
  c_did->add_option("--event-id", event_id, "event id")->required();
  c_did->add_option("--kind", kind, "price | volume | cumulative_volume");
  c_did->add_option("--counterfactuals", cf, "CSV from `counterfactuals`")->required();
  c_did->add_option("--out", out, "output coefficient CSV")->required();

  auto* c_impact = app.add_subcommand("impact", "run the pipeline and emit the impact table");
  add_common(c_impact);
  c_impact->add_option("--out-dir", out, "output directory");

  auto* c_sweep = app.add_subcommand("sweep", "counterfactual counts across correlation thresholds");
  add_common(c_sweep);
  c_sweep->add_option("--grid", grid, "comma-separated t_r values");
  c_sweep->add_option("--out", out, "output CSV")->required();

  auto* c_synth = app.add_subcommand("synth", "generate correlated synthetic series or a fixture");
  add_common(c_synth);
  c_synth->add_option("--fixture-spec", synth_flags.fixture_spec, "fixture spec JSON");
  c_synth->add_option("--out", synth_flags.out, "output file (series) or directory (fixture)");
  c_synth->add_option("--n-assets", synth_flags.n_assets, "asset count");
  c_synth->add_option("--n-slots", synth_flags.n_slots, "slots per series");
  c_synth->add_option("--sigma", synth_flags.sigma, "per-slot log volatility");
  c_synth->add_option("--corr", synth_flags.corr, "pairwise correlation");
  c_synth->add_option("--drift", synth_flags.drift, "per-slot log drift");
  c_synth->add_option("--initial-price", synth_flags.initial_price, "first-slot price");
  c_synth->add_option("--seed", seed_flag, "generator seed");
  c_synth->add_option("--effect-magnitude", synth_flags.effect_magnitude,
                      "injected relative effect (0 = none)");
  c_synth->add_option("--effect-onset", synth_flags.effect_onset, "injected effect onset slot");
  c_synth->add_option("--effect-shape", synth_flags.effect_shape, "step | spike | decay");
  c_synth->add_option("--effect-asset", synth_flags.effect_asset, "asset index to perturb");

  auto* c_run = app.add_subcommand("run-all", "full pipeline: report, impact table, plot data");
  add_common(c_run);
  c_run->add_option("--logs", logs, "JSONL event log dump");
  c_run->add_option("--pools", pools, "pool metadata CSV");
  c_run->add_option("--supplies", supplies, "supply snapshots CSV");
  c_run->add_option("--ethusd", ethusd, "base/USD quote CSV");
  c_run->add_option("--events", events, "events CSV");
  c_run->add_option("--out-dir", out, "output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  return guarded([&]() -> int {
    PipelineConfig cfg = make_config(config_path, sets);
    if (workers > 0) cfg.workers = workers;
    if (!logs.empty()) cfg.logs_path = logs;
    if (!pools.empty()) cfg.pools_path = pools;
    if (!supplies.empty()) cfg.supplies_path = supplies;
    if (!ethusd.empty()) cfg.ethusd_path = ethusd;
    if (!events.empty()) cfg.events_path = events;
    if (seed_flag > 0) cfg.seed = seed_flag;

    if (c_ingest->parsed()) return cmd_ingest(cfg, out);
    if (c_clean->parsed()) return cmd_clean(cfg, trades, out);
    if (c_agg->parsed()) return cmd_aggregate(cfg, trades, event_id, out);
    if (c_match->parsed()) return cmd_match(cfg, actors, tokens, out);
    if (c_cf->parsed()) return cmd_counterfactuals(cfg, series, event_id, kind, out);
    if (c_did->parsed()) return cmd_did(cfg, series, event_id, kind, cf, out);
    if (c_impact->parsed() || c_run->parsed()) {
      if (!out.empty()) cfg.out_dir = out;
      cfg.validate();
      return c_impact->parsed() ? cmd_impact(cfg) : cmd_run_all(cfg);
    }
    if (c_sweep->parsed()) return cmd_sweep(cfg, grid, out);
    if (c_synth->parsed()) return cmd_synth(cfg, synth_flags);
    return 2;
  });
}
