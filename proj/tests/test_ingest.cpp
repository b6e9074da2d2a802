#include <catch2/catch_amalgamated.hpp>

#include "dexdid/ingest.hpp"
#include "dexdid/u256.hpp"
#include "goldens.hpp"

using namespace dexdid;

TEST_CASE("u256 hex word round trip") {
  U256 v = U256::from_u128((static_cast<unsigned __int128>(0x0123456789abcdefULL) << 64) |
                           0xfedcba9876543210ULL);
  std::string hex = v.to_hex_word();
  REQUIRE(hex.size() == 64);
  REQUIRE(U256::from_hex_word(hex) == v);
  REQUIRE(hex == "000000000000000000000000000000000123456789abcdeffedcba9876543210");
}

TEST_CASE("u256 rejects malformed words") {
  REQUIRE_THROWS_AS(U256::from_hex_word("abc"), DecodeError);
  std::string bad(64, '0');
  bad[10] = 'g';
  REQUIRE_THROWS_AS(U256::from_hex_word(bad), DecodeError);
}

TEST_CASE("u256 to_double exact below 2^53") {
  REQUIRE(U256::from_u64(1).to_double() == 1.0);
  REQUIRE(U256::from_u64((1ULL << 53) - 1).to_double() ==
          static_cast<double>((1ULL << 53) - 1));
  unsigned __int128 big = static_cast<unsigned __int128>(3) * 1000000000000000000ULL;
  REQUIRE(U256::from_u128(big).to_double() == 3e18);
}

TEST_CASE("golden payloads decode bit-exactly") {
  for (const auto& g : goldens::decode_goldens()) {
    INFO(g.name);
    RawLog log = goldens::make_log(g);
    if (g.is_sync) {
      if (g.expect_throw) {
        REQUIRE_THROWS_AS(decode_sync(log, g.pool), DegenerateReserve);
        continue;
      }
      Reserves r = decode_sync(log, g.pool);
      REQUIRE(r.base == g.expected_base);
      REQUIRE(r.asset == g.expected_asset);
    } else {
      SwapDecoded d = decode_swap(log, g.pool);
      REQUIRE(d.volume == g.expected_volume);
      REQUIRE(d.direction == g.expected_direction);
      REQUIRE(d.anomalous == g.expected_anomalous);
    }
  }
}

TEST_CASE("abi decoding rejects malformed payloads") {
  PoolMeta pool{"0xp", "WETH", "T", 18, 18, true};
  RawLog log;
  log.topics = {std::string(kSyncTopic)};
  log.data = "0x1234";
  REQUIRE_THROWS_AS(decode_sync(log, pool), DecodeError);
  log.data = "0x" + std::string(64, '0');  // one word, sync needs two
  REQUIRE_THROWS_AS(decode_sync(log, pool), DecodeError);
  log.topics = {std::string(kSwapTopic)};
  REQUIRE_THROWS_AS(decode_sync(log, pool), DecodeError);  // wrong topic
}

TEST_CASE("price orientation") {
  REQUIRE(compute_price(2.0, 8.0, PriceOrientation::base_per_asset) == 0.25);
  REQUIRE(compute_price(2.0, 8.0, PriceOrientation::asset_per_base) == 4.0);
  REQUIRE_THROWS_AS(compute_price(0.0, 1.0), DegenerateReserve);
  REQUIRE(parse_orientation("base_per_asset") == PriceOrientation::base_per_asset);
  REQUIRE(parse_orientation("asset_per_base") == PriceOrientation::asset_per_base);
  REQUIRE_THROWS_AS(parse_orientation("sideways"), SpecError);
}

namespace {

RawLog sync_log(std::uint64_t block, std::uint32_t tx, std::uint32_t ix, unsigned long long b,
                unsigned long long a) {
  RawLog log;
  log.pool_address = "0xpool";
  log.block_number = block;
  log.block_timestamp = static_cast<std::int64_t>(1'600'000'000 + block * 15);
  log.tx_index = tx;
  log.log_index = ix;
  log.topics = {std::string(kSyncTopic)};
  unsigned __int128 e18 = 1000000000000000000ULL;
  log.data = encode_words({U256::from_u128(b * e18), U256::from_u128(a * e18)});
  return log;
}

RawLog swap_log(std::uint64_t block, std::uint32_t tx, std::uint32_t ix, unsigned long long in0,
                unsigned long long out1) {
  RawLog log;
  log.pool_address = "0xpool";
  log.block_number = block;
  log.block_timestamp = static_cast<std::int64_t>(1'600'000'000 + block * 15);
  log.tx_index = tx;
  log.log_index = ix;
  std::string pad0(64, '0');
  log.topics = {std::string(kSwapTopic), "0x" + pad0, "0x" + pad0};
  unsigned __int128 e18 = 1000000000000000000ULL;
  log.data = encode_words({U256::from_u128(in0 * e18), U256::from_u64(0),
                                   U256::from_u64(0), U256::from_u128(out1 * e18)});
  return log;
}

const PoolMeta kPool{"0xpool", "WETH", "TKN", 18, 18, true};

}  // namespace

TEST_CASE("trade series prices swaps from the same-transaction sync") {
  std::vector<RawLog> logs;
  logs.push_back(sync_log(100, 0, 0, 4, 16));  // price 0.25
  logs.push_back(swap_log(100, 0, 1, 1, 3));
  logs.push_back(sync_log(101, 2, 0, 5, 10));  // price 0.5
  logs.push_back(swap_log(101, 2, 1, 2, 3));

  IngestStats stats;
  auto points = build_trade_series(logs, kPool, PriceOrientation::base_per_asset, &stats);
  REQUIRE(points.size() == 2);
  REQUIRE(points[0].price == 0.25);
  REQUIRE(points[0].volume == 1.0);
  REQUIRE(points[0].direction == 1);
  REQUIRE(points[1].price == 0.5);
  REQUIRE(points[1].volume == 2.0);
  REQUIRE(stats.swaps == 2);
  REQUIRE(stats.syncs == 2);
  REQUIRE(stats.orphan_swaps == 0);
}

TEST_CASE("swap without same-tx sync is an orphan priced off prior reserves") {
  std::vector<RawLog> logs;
  logs.push_back(sync_log(100, 0, 0, 4, 16));
  logs.push_back(swap_log(105, 0, 0, 1, 3));  // new tx, no sync in it

  IngestStats stats;
  auto points = build_trade_series(logs, kPool, PriceOrientation::base_per_asset, &stats);
  REQUIRE(points.size() == 1);
  REQUIRE(points[0].price == 0.25);
  REQUIRE(stats.orphan_swaps == 1);
  REQUIRE(stats.dropped_no_price == 0);
}

TEST_CASE("swap before any sync is dropped") {
  std::vector<RawLog> logs;
  logs.push_back(swap_log(99, 0, 0, 1, 3));
  logs.push_back(sync_log(100, 0, 0, 4, 16));
  logs.push_back(swap_log(100, 0, 1, 1, 3));

  IngestStats stats;
  auto points = build_trade_series(logs, kPool, PriceOrientation::base_per_asset, &stats);
  REQUIRE(points.size() == 1);
  REQUIRE(stats.dropped_no_price == 1);
  REQUIRE(stats.orphan_swaps == 1);  // the dropped swap also had no sync in its tx
}

TEST_CASE("degenerate sync is skipped and counted") {
  std::vector<RawLog> logs;
  logs.push_back(sync_log(100, 0, 0, 4, 16));
  logs.push_back(sync_log(101, 0, 0, 0, 16));  // zero reserve
  logs.push_back(swap_log(101, 0, 1, 1, 3));   // priced from block 100 reserves

  IngestStats stats;
  auto points = build_trade_series(logs, kPool, PriceOrientation::base_per_asset, &stats);
  REQUIRE(points.size() == 1);
  REQUIRE(points[0].price == 0.25);
  REQUIRE(stats.degenerate_syncs == 1);
}

TEST_CASE("anomalous swap yields a zero-volume point") {
  std::vector<RawLog> logs;
  logs.push_back(sync_log(100, 0, 0, 4, 16));
  RawLog z = swap_log(100, 0, 1, 0, 0);
  logs.push_back(z);

  IngestStats stats;
  auto points = build_trade_series(logs, kPool, PriceOrientation::base_per_asset, &stats);
  REQUIRE(points.size() == 1);
  REQUIRE(points[0].volume == 0.0);
  REQUIRE(points[0].direction == 0);
  REQUIRE(stats.anomalous_swaps == 1);
}

TEST_CASE("unknown topics are counted, not fatal") {
  std::vector<RawLog> logs;
  logs.push_back(sync_log(100, 0, 0, 4, 16));
  RawLog odd = sync_log(100, 0, 1, 1, 1);
  odd.topics = {"0x" + std::string(64, 'e')};
  logs.push_back(odd);
  IngestStats stats;
  auto points = build_trade_series(logs, kPool, PriceOrientation::base_per_asset, &stats);
  REQUIRE(points.empty());
  REQUIRE(stats.unknown_topics == 1);
}

TEST_CASE("out-of-order logs are rejected") {
  std::vector<RawLog> logs;
  logs.push_back(sync_log(101, 0, 0, 4, 16));
  logs.push_back(sync_log(100, 0, 0, 4, 16));
  REQUIRE_THROWS_AS(build_trade_series(logs, kPool), std::invalid_argument);

  std::vector<RawLog> dup;
  dup.push_back(sync_log(100, 0, 0, 4, 16));
  dup.push_back(sync_log(100, 0, 0, 4, 16));
  REQUIRE_THROWS_AS(build_trade_series(dup, kPool), std::invalid_argument);
}

TEST_CASE("orientation flips the recorded price") {
  std::vector<RawLog> logs;
  logs.push_back(sync_log(100, 0, 0, 4, 16));
  logs.push_back(swap_log(100, 0, 1, 1, 3));
  auto points = build_trade_series(logs, kPool, PriceOrientation::asset_per_base);
  REQUIRE(points.size() == 1);
  REQUIRE(points[0].price == 4.0);
}
