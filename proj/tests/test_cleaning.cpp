#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "dexdid/cleaning.hpp"
#include "oracles.hpp"

using namespace dexdid;

TEST_CASE("rolling median with centered clipped windows") {
  std::vector<double> xs{1, 2, 3, 4, 5};
  auto med = rolling_median(xs, 3);  // halfwidth 1
  REQUIRE(med[0] == 1.5);            // window {1,2}
  REQUIRE(med[1] == 2.0);            // {1,2,3}
  REQUIRE(med[2] == 3.0);
  REQUIRE(med[4] == 4.5);            // {4,5}
}

TEST_CASE("modified z-score matches the hand formula") {
  // centered window, MAD 1 at every index checked below
  std::vector<double> xs{1, 2, 3, 4, 100};
  std::vector<double> center(xs.size(), 3.0);
  auto z = modified_zscore(xs, center, 5);
  REQUIRE(z[4] == Catch::Approx(0.6745 * 97.0).epsilon(1e-14));
  REQUIRE(z[2] == 0.0);
  REQUIRE(z[0] == Catch::Approx(-0.6745 * 2.0).epsilon(1e-14));
}

TEST_CASE("zero MAD never mass-flags flat stretches") {
  std::vector<double> xs(10, 5.0);
  xs[7] = 6.0;
  std::vector<double> center(xs.size(), 5.0);
  auto z = modified_zscore(xs, center, 9);
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i == 7) REQUIRE(std::isinf(z[i]));
    else REQUIRE(z[i] == 0.0);
  }
}

TEST_CASE("window longer than the series is rejected") {
  std::vector<double> xs{1, 2, 3};
  std::vector<double> c{1, 2, 3};
  REQUIRE_THROWS_AS(modified_zscore(xs, c, 4), WindowTooLong);
}

namespace {

std::vector<TradePoint> with_spike(std::uint64_t seed, std::size_t n, std::size_t at,
                                   double factor) {
  auto points = oracle::walk_trades(seed, n, 0.005);
  points[at].price *= factor;
  return points;
}

}  // namespace

TEST_CASE("a reverting x10 spike is removed") {
  auto points = with_spike(42, 1200, 600, 10.0);
  auto [kept, report] = remove_spikes(points, CleanParams{});
  REQUIRE(report.removed_count >= 1);
  bool spike_removed = true;
  for (const auto& p : kept) spike_removed = spike_removed && p.block != points[600].block;
  REQUIRE(spike_removed);
  REQUIRE(report.total_count == 1200);
  REQUIRE(kept.size() + report.removed_count == 1200);
}

TEST_CASE("a persistent level shift is flagged globally but not removed") {
  auto points = oracle::walk_trades(7, 1200, 0.005);
  for (std::size_t i = 600; i < points.size(); ++i) points[i].price *= 10.0;
  auto [kept, report] = remove_spikes(points, CleanParams{});
  // the jump point deviates in z but the following blocks do not revert
  bool shift_point_kept = false;
  for (const auto& p : kept) shift_point_kept = shift_point_kept || p.block == points[600].block;
  REQUIRE(shift_point_kept);
}

TEST_CASE("spike at the very end has no after-blocks and survives") {
  auto points = with_spike(41, 800, 799, 10.0);
  auto [kept, report] = remove_spikes(points, CleanParams{});
  bool last_kept = false;
  for (const auto& p : kept) last_kept = last_kept || p.block == points[799].block;
  REQUIRE(last_kept);
}

TEST_CASE("cleaning is idempotent") {
  auto points = with_spike(43, 1500, 700, 10.0);
  auto [once, r1] = remove_spikes(points, CleanParams{});
  auto [twice, r2] = remove_spikes(once, CleanParams{});
  REQUIRE(r2.removed_count == 0);
  REQUIRE(twice.size() == once.size());
  for (std::size_t i = 0; i < once.size(); ++i) {
    REQUIRE(twice[i].block == once[i].block);
    REQUIRE(twice[i].price == once[i].price);
  }
}

TEST_CASE("clean walks stay nearly untouched") {
  auto points = oracle::walk_trades(11, 2000, 0.005);
  auto [kept, report] = remove_spikes(points, CleanParams{});
  REQUIRE(report.removed_count <= 2);  // < 0.5% of 2000 trades
}

TEST_CASE("tiny series pass through untouched") {
  std::vector<TradePoint> one(1);
  one[0].price = 1.0;
  auto [kept, report] = remove_spikes(one, CleanParams{});
  REQUIRE(kept.size() == 1);
  REQUIRE(report.removed_count == 0);
}

TEST_CASE("maturity needs both span and density") {
  auto make = [](std::uint64_t span, std::uint64_t step) {
    std::vector<TradePoint> pts;
    for (std::uint64_t b = 0; b <= span; b += step) {
      TradePoint p;
      p.block = 5'000'000 + b;
      p.price = 1.0;
      pts.push_back(p);
    }
    return pts;
  };
  MaturityParams params;  // span >= 1,000,000 and mean gap <= 6,000

  REQUIRE(maturity_check(make(1'000'000, 5000), params));
  // 999,999 = 333 * 3003: same density, one block short of the span bar
  REQUIRE_FALSE(maturity_check(make(999'999, 3003), params));

  // exact mean-gap boundary: 6000 passes, 6001 fails
  REQUIRE(maturity_check(make(1'002'000, 6000), params));
  REQUIRE_FALSE(maturity_check(make(1'002'167, 6001), params));

  // two sparse points span enough but are too thin
  std::vector<TradePoint> sparse = make(1'000'000, 1'000'000);
  REQUIRE(sparse.size() == 2);
  REQUIRE_FALSE(maturity_check(sparse, params));

  REQUIRE_FALSE(maturity_check({}, params));
  REQUIRE_FALSE(maturity_check(make(0, 1), params));
}
