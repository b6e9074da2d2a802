#include <catch2/catch_amalgamated.hpp>

#include <boost/math/distributions/students_t.hpp>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "dexdid/config.hpp"
#include "dexdid/io.hpp"
#include "dexdid/pipeline.hpp"

using namespace dexdid;
namespace fs = std::filesystem;

namespace {

fs::path tmp_dir() {
  fs::path dir = fs::temp_directory_path() / "dexdid_test_io";
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void spit(const fs::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  out << text;
}

}  // namespace

TEST_CASE("trade files round-trip and stabilize after one write") {
  std::vector<TradePoint> trades;
  TradePoint p;
  p.asset = "AAA";
  p.block = 12000000;
  p.timestamp = 1620000000;
  p.price = 0.1 + 0.2;  // not exactly representable at 15 digits
  p.volume = 1.0 / 3.0;
  p.reserves_base = 1234.5;
  p.reserves_asset = 1e-18;
  p.tx_index = 7;
  p.log_index = 3;
  p.direction = -1;
  trades.push_back(p);
  p.asset = "with,comma";
  p.log_index = 4;
  p.direction = 0;
  trades.push_back(p);

  fs::path f1 = tmp_dir() / "trades1.csv", f2 = tmp_dir() / "trades2.csv";
  write_trades(f1.string(), trades);
  auto got = read_trades(f1.string());
  REQUIRE(got.size() == 2);
  REQUIRE(got[0].asset == "AAA");
  REQUIRE(got[1].asset == "with,comma");
  REQUIRE(got[0].block == 12000000);
  REQUIRE(got[0].price == round15(0.1 + 0.2));
  REQUIRE(got[0].volume == round15(1.0 / 3.0));
  REQUIRE(got[0].reserves_asset == 1e-18);
  REQUIRE(got[1].direction == 0);

  // 15-digit decimals are a fixed point: the second write is byte-identical.
  write_trades(f2.string(), got);
  REQUIRE(slurp(f1) == slurp(f2));
}

TEST_CASE("series files round-trip with negative slots and mixed kinds") {
  IntervalSeries price;
  price.asset = "AAA";
  price.kind = SeriesKind::price;
  price.dt = 21600;
  price.origin = 1609459200;
  price.values = {{-400, 1.5}, {-399, 1.25}, {0, 2.0}};
  IntervalSeries vol;
  vol.asset = "AAA";
  vol.kind = SeriesKind::volume;
  vol.dt = 21600;
  vol.origin = 1609459200;
  vol.values = {{-2, 0.0}, {5, 10.5}};

  fs::path f = tmp_dir() / "series.csv";
  write_series(f.string(), {price, vol});
  auto got = read_series(f.string());
  REQUIRE(got.size() == 2);
  REQUIRE(got[0].kind == SeriesKind::price);
  REQUIRE(got[0].values == price.values);
  REQUIRE(got[1].kind == SeriesKind::volume);
  REQUIRE(got[1].values == vol.values);
  REQUIRE(got[0].origin == 1609459200);

  spit(tmp_dir() / "bad_order.csv",
       "asset,kind,dt,origin,slot,value\nA,price,21600,0,5,1\nA,price,21600,0,5,2\n");
  REQUIRE_THROWS_AS(read_series((tmp_dir() / "bad_order.csv").string()), SchemaError);

  spit(tmp_dir() / "bad_dt.csv",
       "asset,kind,dt,origin,slot,value\nA,price,21600,0,1,1\nA,price,3600,0,2,2\n");
  REQUIRE_THROWS_AS(read_series((tmp_dir() / "bad_dt.csv").string()), SchemaError);

  spit(tmp_dir() / "bad_kind.csv", "asset,kind,dt,origin,slot,value\nA,prize,21600,0,1,1\n");
  try {
    read_series((tmp_dir() / "bad_kind.csv").string());
    FAIL("expected SchemaError");
  } catch (const SchemaError& e) {
    REQUIRE(std::string(e.what()).find("bad_kind.csv:2") != std::string::npos);
  }
}

TEST_CASE("log files round-trip as JSONL and reject malformed rows") {
  RawLog log;
  log.pool_address = "0xabc";
  log.topics = {"0x1c411e9a96e071241c2f21f7726b17ae89e3cab4c78be50e062b03a9fffbbad1"};
  log.data = "0x00";
  log.block_number = 123;
  log.block_timestamp = 456;
  log.tx_index = 1;
  log.log_index = 2;

  fs::path f = tmp_dir() / "logs.jsonl";
  write_logs(f.string(), {log});
  auto got = read_logs(f.string());
  REQUIRE(got.size() == 1);
  REQUIRE(got[0].pool_address == "0xabc");
  REQUIRE(got[0].topics == log.topics);
  REQUIRE(got[0].block_number == 123);
  REQUIRE(got[0].tx_index == 1);

  spit(tmp_dir() / "missing.jsonl", R"({"pool_address":"0x1","topics":["0xa"],"data":"0x"})"
                                    "\n");
  try {
    read_logs((tmp_dir() / "missing.jsonl").string());
    FAIL("expected SchemaError");
  } catch (const SchemaError& e) {
    std::string msg = e.what();
    REQUIRE(msg.find("missing.jsonl:1") != std::string::npos);
    REQUIRE(msg.find("block_number") != std::string::npos);
  }

  spit(tmp_dir() / "notjson.jsonl", "{nope\n");
  REQUIRE_THROWS_AS(read_logs((tmp_dir() / "notjson.jsonl").string()), SchemaError);

  spit(tmp_dir() / "notopics.jsonl",
       R"({"pool_address":"0x1","topics":[],"data":"0x","block_number":1,)"
       R"("block_timestamp":2,"tx_index":0,"log_index":0})"
       "\n");
  REQUIRE_THROWS_AS(read_logs((tmp_dir() / "notopics.jsonl").string()), SchemaError);

  REQUIRE_THROWS_AS(read_logs((tmp_dir() / "does_not_exist.jsonl").string()), SchemaError);
}

TEST_CASE("pool, supply, quote, and event tables round-trip") {
  fs::path dir = tmp_dir();

  PoolMeta m;
  m.pool_address = "0xpool";
  m.base_symbol = "WETH";
  m.asset_symbol = "AAA";
  m.base_decimals = 18;
  m.asset_decimals = 6;
  m.base_is_token0 = false;
  write_pools((dir / "pools.csv").string(), {m});
  auto pools = read_pools((dir / "pools.csv").string());
  REQUIRE(pools.size() == 1);
  REQUIRE(pools[0].asset_decimals == 6);
  REQUIRE(pools[0].base_is_token0 == false);

  spit(dir / "badpool.csv",
       "pool_address,base_symbol,asset_symbol,base_decimals,asset_decimals,base_is_token0\n"
       "0x1,WETH,AAA,18,18,maybe\n");
  REQUIRE_THROWS_AS(read_pools((dir / "badpool.csv").string()), SchemaError);

  write_supplies((dir / "supplies.csv").string(), {{"AAA", 100, 1e9}, {"BBB", 5, 2.5}});
  auto sup = read_supplies((dir / "supplies.csv").string());
  REQUIRE(sup.size() == 2);
  REQUIRE(sup[0].asset == "AAA");
  REQUIRE(sup[0].block == 100);
  REQUIRE(sup[0].total_supply == 1e9);

  write_ethusd((dir / "ethusd.csv").string(), {{1609459200, 737.71}});
  auto quotes = read_ethusd((dir / "ethusd.csv").string());
  REQUIRE(quotes.size() == 1);
  REQUIRE(quotes[0].timestamp == 1609459200);
  REQUIRE(quotes[0].usd_per_eth == 737.71);

  CrimeEvent known{1, "AAA", parse_iso_date("2021-05-20"), "exchange hack", 5e6};
  CrimeEvent masked{2, "BBB", parse_iso_date("2021-06-01"), "exploit, unquantified",
                    std::nullopt};
  write_events((dir / "events.csv").string(), {known, masked});
  auto events = read_events((dir / "events.csv").string());
  REQUIRE(events.size() == 2);
  REQUIRE(events[0].direct_loss_usd.value() == 5e6);
  REQUIRE(events[1].direct_loss_usd == std::nullopt);
  REQUIRE(events[1].description == "exploit, unquantified");
  REQUIRE(events[0].announcement_ts == 1621468800);

  // Announcements may also be raw epoch seconds.
  spit(dir / "events_epoch.csv",
       "id,asset,announcement,description,direct_loss_usd\n3,CCC,1621468800,x,\n");
  REQUIRE(read_events((dir / "events_epoch.csv").string())[0].announcement_ts == 1621468800);
}

TEST_CASE("csv quoting survives commas and quotes") {
  fs::path f = tmp_dir() / "quoted.csv";
  std::ofstream out(f);
  out << "a,b\n" << csv_escape("x,y") << ',' << csv_escape("say \"hi\"") << '\n';
  out.close();
  auto t = read_csv(f.string());
  REQUIRE(t.rows.size() == 1);
  REQUIRE(t.rows[0][0] == "x,y");
  REQUIRE(t.rows[0][1] == "say \"hi\"");
}

TEST_CASE("config files load with comments and reject unknown keys") {
  fs::path f = tmp_dir() / "run.conf";
  spit(f,
       "# analysis settings\n"
       "params.t_r = 0.5\n"
       "params.c = 7   # tighter pool\n"
       "windows.long = -120:-20\n"
       "match.keywords = dao, finance\n"
       "run.workers = 8\n");
  PipelineConfig cfg;
  load_config_file(cfg, f.string());
  REQUIRE(cfg.t_r == 0.5);
  REQUIRE(cfg.c == 7);
  REQUIRE(cfg.long_days.lo == -120);
  REQUIRE(cfg.long_days.hi == -20);
  REQUIRE(cfg.keywords == std::vector<std::string>{"dao", "finance"});
  REQUIRE(cfg.workers == 8);

  // Later assignments win, so command-line overrides apply after the file.
  apply_config_key(cfg, "params.t_r", "0.6", "--set");
  REQUIRE(cfg.t_r == 0.6);

  REQUIRE_THROWS_AS(apply_config_key(cfg, "params.bogus", "1", "--set"), SpecError);
  spit(tmp_dir() / "bad.conf", "params.t_r 0.5\n");
  REQUIRE_THROWS_AS(load_config_file(cfg, (tmp_dir() / "bad.conf").string()), SpecError);
}

TEST_CASE("config validation enforces window order and slot divisibility") {
  PipelineConfig cfg;
  cfg.validate();  // defaults are valid

  PipelineConfig bad_dt = cfg;
  bad_dt.dt = 25200;  // 7h does not divide the day
  REQUIRE_THROWS_AS(bad_dt.validate(), SpecError);

  PipelineConfig bad_windows = cfg;
  bad_windows.short_days = {-1, 5};  // overlaps the event window
  REQUIRE_THROWS_AS(bad_windows.validate(), SpecError);

  PipelineConfig bad_p = cfg;
  bad_p.p_threshold = 1.0;
  REQUIRE_THROWS_AS(bad_p.validate(), SpecError);

  REQUIRE(cfg.slots_per_day() == 4);
  REQUIRE(cfg.long_slots().lo == -400);
  REQUIRE(cfg.long_slots().hi == -40);
  REQUIRE(cfg.short_slots().lo == -40);
  REQUIRE(cfg.short_slots().hi == -4);
  REQUIRE(cfg.event_slots().lo == -4);
  REQUIRE(cfg.event_slots().hi == 8);
  REQUIRE(cfg.anchor_slot() == -4);
}

TEST_CASE("config hash identifies the analysis, not the execution") {
  PipelineConfig a;
  PipelineConfig b;
  b.workers = 32;
  b.out_dir = "elsewhere";
  REQUIRE(a.config_hash() == b.config_hash());

  PipelineConfig c;
  c.t_r = 0.5;
  REQUIRE(a.config_hash() != c.config_hash());

  PipelineConfig d;
  d.keywords = {"finance", "dao"};  // order matters: it is part of the analysis
  REQUIRE(a.config_hash() != d.config_hash());
  REQUIRE(a.config_hash().size() == 16);
}

TEST_CASE("dates and slots convert exactly at boundaries") {
  REQUIRE(parse_iso_date("2021-01-01") == 1609459200);
  REQUIRE(parse_iso_date("1970-01-01") == 0);
  REQUIRE(format_iso_date(1609459200) == "2021-01-01");
  REQUIRE(format_iso_date(1609459200 + 86399) == "2021-01-01");
  REQUIRE(format_iso_date(parse_iso_date("2021-05-20")) == "2021-05-20");
  REQUIRE_THROWS_AS(parse_iso_date("2021-13-01"), std::invalid_argument);
  REQUIRE_THROWS_AS(parse_iso_date("garbage"), std::invalid_argument);
  REQUIRE(parse_time_arg("1621468800") == 1621468800);

  REQUIRE(slot_of(0, 0, 21600) == 0);
  REQUIRE(slot_of(21599, 0, 21600) == 0);
  REQUIRE(slot_of(21600, 0, 21600) == 1);
  REQUIRE(slot_of(-1, 0, 21600) == -1);
  REQUIRE(slot_of(-21600, 0, 21600) == -1);
  REQUIRE(slot_of(-21601, 0, 21600) == -2);
  REQUIRE(slot_start(-1, 100, 21600) == 100 - 21600);
}

TEST_CASE("digests and numeric formatting are stable") {
  REQUIRE(fnv1a("a", 1) == 0xaf63dc4c8601ec8cULL);
  REQUIRE(hex64(0xaf63dc4c8601ec8cULL) == "af63dc4c8601ec8c");
  REQUIRE(hex64(0x1ULL) == "0000000000000001");

  for (double v : {0.1 + 0.2, 1.0 / 3.0, 1e-18, 123456.789, -0.0054321}) {
    double r = round15(v);
    REQUIRE(round15(r) == r);
    REQUIRE(fmt_num(r) == fmt_num(round15(r)));
  }
  REQUIRE(fmt_num(1.5) == "1.5");
  REQUIRE(fmt_num(0.0) == "0");
}

TEST_CASE("coefficient plot files carry 90 percent bands and threshold flags") {
  DiDFit fit;
  fit.dof = 5;
  GammaStat g1{-0.10, 0.02, -5.0, 0.004};
  GammaStat g2{0.03, 0.05, 0.6, 0.57};
  fit.gamma[-1] = g1;
  fit.gamma[2] = g2;

  fs::path f = tmp_dir() / "coeffs.csv";
  write_coeff_plot(f.string(), fit, 0.1);
  auto t = read_csv(f.string());
  REQUIRE(t.header == std::vector<std::string>{"slot", "estimate", "lo90", "hi90", "p_value",
                                               "significant"});
  REQUIRE(t.rows.size() == 2);

  boost::math::students_t dist(5.0);
  double tcrit = boost::math::quantile(dist, 0.95);
  REQUIRE(t.rows[0][0] == "-1");
  REQUIRE(parse_double(t.rows[0][2], "lo") ==
          Catch::Approx(-0.10 - tcrit * 0.02).epsilon(1e-12));
  REQUIRE(parse_double(t.rows[0][3], "hi") ==
          Catch::Approx(-0.10 + tcrit * 0.02).epsilon(1e-12));
  REQUIRE(t.rows[0][5] == "1");
  REQUIRE(t.rows[1][5] == "0");
}
