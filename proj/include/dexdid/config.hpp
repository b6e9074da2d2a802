#pragma once

#include <cstdint>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "dexdid/cleaning.hpp"
#include "dexdid/counterfactual.hpp"
#include "dexdid/errors.hpp"
#include "dexdid/ingest.hpp"
#include "dexdid/textio.hpp"
#include "dexdid/types.hpp"

/*
 * Pipeline configuration. Source of truth is a flat key-value file with
 * dotted keys (`params.t_r = 0.4`); command-line flags overwrite file
 * values. Day-denominated windows are half-open [lo, hi) relative to the
 * announcement date and must convert to whole slots.
 */

namespace dexdid {

struct DayRange {
  int lo = 0;
  int hi = 0;
};

struct PipelineConfig {
  // input/output paths
  std::string logs_path;
  std::string pools_path;
  std::string supplies_path;
  std::string ethusd_path;
  std::string events_path;
  std::string out_dir = "out";

  // analysis parameters
  std::int64_t dt = 21600;  // seconds
  double t_r = 0.4;
  std::size_t c = 10;
  double p_threshold = 0.1;
  std::size_t min_overlap = 30;
  PriceOrientation orientation = PriceOrientation::base_per_asset;
  bool exclude_treated = false;
  std::uint64_t seed = 1;  // synthetic-data subcommands only

  DayRange long_days{-100, -10};
  DayRange short_days{-10, -1};
  DayRange event_days{-1, 2};

  CleanParams clean;
  MaturityParams maturity;

  std::vector<std::string> keywords = {"dao", "network", "finance", "protocol"};

  // execution-only (excluded from the config hash)
  std::size_t workers = 1;

  std::int64_t slots_per_day() const { return 86400 / dt; }
  SlotRange long_slots() const { return {long_days.lo * slots_per_day(), long_days.hi * slots_per_day()}; }
  SlotRange short_slots() const { return {short_days.lo * slots_per_day(), short_days.hi * slots_per_day()}; }
  SlotRange event_slots() const { return {event_days.lo * slots_per_day(), event_days.hi * slots_per_day()}; }
  SlotRange analysis_slots() const { return {short_slots().lo, event_slots().hi}; }
  std::int64_t anchor_slot() const { return event_slots().lo; }

  SelectionConfig selection() const { return {t_r, c, min_overlap}; }

  void validate() const {
    if (dt <= 0 || 86400 % dt != 0)
      throw SpecError("dt must be a positive divisor of 86400 seconds");
    if (!(p_threshold > 0.0 && p_threshold < 1.0)) throw SpecError("p_threshold must lie in (0, 1)");
    if (!(t_r >= 0.0 && t_r < 1.0)) throw SpecError("t_r must lie in [0, 1)");
    if (c < 1) throw SpecError("c must be at least 1");
    bool ordered = long_days.lo < long_days.hi && long_days.hi <= short_days.lo &&
                   short_days.lo < short_days.hi && short_days.hi <= event_days.lo &&
                   event_days.lo < event_days.hi;
    if (!ordered) throw SpecError("windows must be ordered and non-overlapping: long < short < event");
    if (clean.window == 0 || clean.local_window == 0) throw SpecError("cleaning windows must be positive");
  }

  // Canonical text form; sorted keys, fixed formatting. Execution-only keys
  // (run.workers, paths.out) stay out so the hash identifies the analysis,
  // not the machine settings or where results land.
  std::string canonical() const {
    std::map<std::string, std::string> kv;
    kv["paths.logs"] = logs_path;
    kv["paths.pools"] = pools_path;
    kv["paths.supplies"] = supplies_path;
    kv["paths.ethusd"] = ethusd_path;
    kv["paths.events"] = events_path;
    kv["params.dt_seconds"] = std::to_string(dt);
    kv["params.t_r"] = fmt_num(t_r);
    kv["params.c"] = std::to_string(c);
    kv["params.p_threshold"] = fmt_num(p_threshold);
    kv["params.min_overlap"] = std::to_string(min_overlap);
    kv["params.price_orientation"] =
        orientation == PriceOrientation::base_per_asset ? "base_per_asset" : "asset_per_base";
    kv["params.exclude_treated"] = exclude_treated ? "true" : "false";
    kv["params.seed"] = std::to_string(seed);
    kv["windows.long"] = std::to_string(long_days.lo) + ":" + std::to_string(long_days.hi);
    kv["windows.short"] = std::to_string(short_days.lo) + ":" + std::to_string(short_days.hi);
    kv["windows.event"] = std::to_string(event_days.lo) + ":" + std::to_string(event_days.hi);
    kv["clean.window"] = std::to_string(clean.window);
    kv["clean.threshold"] = fmt_num(clean.threshold);
    kv["clean.block_radius"] = std::to_string(clean.block_radius);
    kv["clean.local_window"] = std::to_string(clean.local_window);
    kv["maturity.min_span_blocks"] = std::to_string(maturity.min_span_blocks);
    kv["maturity.max_mean_gap"] = fmt_num(maturity.max_mean_gap_blocks);
    std::string kws;
    for (const auto& k : keywords) {
      if (!kws.empty()) kws += ',';
      kws += k;
    }
    kv["match.keywords"] = kws;
    std::string out;
    for (const auto& [k, v] : kv) out += k + " = " + v + "\n";
    return out;
  }

  std::string config_hash() const {
    auto c14n = canonical();
    return hex64(fnv1a(c14n.data(), c14n.size()));
  }
};

namespace detail {

inline std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t");
  return s.substr(a, b - a + 1);
}

inline DayRange parse_day_range(const std::string& s, const std::string& ctx) {
  std::size_t colon = s.find(':');
  if (colon == std::string::npos) throw SpecError(ctx + ": expected 'lo:hi' day range, got '" + s + "'");
  DayRange r;
  r.lo = static_cast<int>(parse_int(trim(s.substr(0, colon)), ctx));
  r.hi = static_cast<int>(parse_int(trim(s.substr(colon + 1)), ctx));
  return r;
}

inline bool parse_bool(const std::string& s, const std::string& ctx) {
  if (s == "true" || s == "1") return true;
  if (s == "false" || s == "0") return false;
  throw SpecError(ctx + ": expected true/false, got '" + s + "'");
}

inline std::vector<std::string> parse_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

}  // namespace detail

// Apply one dotted key; unknown keys are errors so typos cannot silently
// fall back to defaults.
inline void apply_config_key(PipelineConfig& cfg, const std::string& key,
                             const std::string& value, const std::string& ctx) {
  if (key == "paths.logs") cfg.logs_path = value;
  else if (key == "paths.pools") cfg.pools_path = value;
  else if (key == "paths.supplies") cfg.supplies_path = value;
  else if (key == "paths.ethusd") cfg.ethusd_path = value;
  else if (key == "paths.events") cfg.events_path = value;
  else if (key == "paths.out") cfg.out_dir = value;
  else if (key == "params.dt_hours") {
    double h = parse_double(value, ctx);
    cfg.dt = static_cast<std::int64_t>(h * 3600.0 + 0.5);
  } else if (key == "params.dt_seconds") cfg.dt = parse_int(value, ctx);
  else if (key == "params.t_r") cfg.t_r = parse_double(value, ctx);
  else if (key == "params.c") cfg.c = static_cast<std::size_t>(parse_int(value, ctx));
  else if (key == "params.p_threshold") cfg.p_threshold = parse_double(value, ctx);
  else if (key == "params.min_overlap") cfg.min_overlap = static_cast<std::size_t>(parse_int(value, ctx));
  else if (key == "params.price_orientation") cfg.orientation = parse_orientation(value);
  else if (key == "params.exclude_treated") cfg.exclude_treated = detail::parse_bool(value, ctx);
  else if (key == "params.seed") cfg.seed = static_cast<std::uint64_t>(parse_int(value, ctx));
  else if (key == "windows.long") cfg.long_days = detail::parse_day_range(value, ctx);
  else if (key == "windows.short") cfg.short_days = detail::parse_day_range(value, ctx);
  else if (key == "windows.event") cfg.event_days = detail::parse_day_range(value, ctx);
  else if (key == "clean.window") cfg.clean.window = static_cast<std::size_t>(parse_int(value, ctx));
  else if (key == "clean.threshold") cfg.clean.threshold = parse_double(value, ctx);
  else if (key == "clean.block_radius") cfg.clean.block_radius = static_cast<std::uint64_t>(parse_int(value, ctx));
  else if (key == "clean.local_window") cfg.clean.local_window = static_cast<std::size_t>(parse_int(value, ctx));
  else if (key == "maturity.min_span_blocks") cfg.maturity.min_span_blocks = static_cast<std::uint64_t>(parse_int(value, ctx));
  else if (key == "maturity.max_mean_gap") cfg.maturity.max_mean_gap_blocks = parse_double(value, ctx);
  else if (key == "match.keywords") cfg.keywords = detail::parse_list(value);
  else if (key == "run.workers") cfg.workers = static_cast<std::size_t>(parse_int(value, ctx));
  else throw SpecError(ctx + ": unknown config key '" + key + "'");
}

inline void load_config_file(PipelineConfig& cfg, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SchemaError(path + ": cannot open config file");
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string ctx = path + ":" + std::to_string(lineno);
    auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos) throw SpecError(ctx + ": expected 'key = value'");
    std::string key = detail::trim(line.substr(0, eq));
    std::string value = detail::trim(line.substr(eq + 1));
    apply_config_key(cfg, key, value, ctx);
  }
}

}  // namespace dexdid
