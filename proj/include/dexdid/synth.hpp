#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "dexdid/errors.hpp"
#include "dexdid/types.hpp"

/*
 * Synthetic market panels with a known correlation structure and known
 * injected effects. Per-slot log-returns are equicorrelated Gaussians,
 * obtained by pushing independent draws through the Cholesky factor of the
 * equicorrelation matrix; prices follow the cumulated returns. Everything
 * is a pure function of the seed.
 *
 * Normal draws come from a hand-rolled Box-Muller transform because the
 * standard library's normal_distribution is not bit-identical across
 * implementations.
 */

namespace dexdid {

enum class EffectShape { step, spike, decay };

struct Effect {
  std::int64_t onset_slot = 0;
  double magnitude = 0.0;  // fractional: -0.10 for a -10% move
  EffectShape shape = EffectShape::step;
};

struct SynthSpec {
  std::size_t n_assets = 2;
  std::size_t n_slots = 100;
  double per_slot_sigma = 0.01;
  double pairwise_corr = 0.0;
  double drift = 0.0;
  std::uint64_t seed = 1;
  std::int64_t start_slot = 0;
  std::int64_t dt = 21600;
  std::int64_t origin = 0;
  double initial_price = 100.0;
  std::string prefix = "A";
};

namespace detail {

class NormalSource {
 public:
  explicit NormalSource(std::uint64_t seed) : rng_(seed) {}

  double uniform01() {  // (0, 1]
    return (static_cast<double>(rng_() >> 11) + 1.0) * 0x1p-53;
  }

  double normal() {
    double u1 = uniform01();
    double u2 = uniform01();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * 3.14159265358979323846 * u2);
  }

 private:
  std::mt19937_64 rng_;
};

}  // namespace detail

inline std::string synth_asset_name(const std::string& prefix, std::size_t i,
                                    std::size_t n_assets) {
  std::size_t width = std::to_string(n_assets > 0 ? n_assets - 1 : 0).size();
  std::string num = std::to_string(i);
  while (num.size() < width) num.insert(num.begin(), '0');
  return prefix + num;
}

inline std::vector<IntervalSeries> generate(const SynthSpec& spec) {
  if (spec.n_assets < 1) throw SpecError("n_assets must be at least 1");
  if (spec.n_slots < 1) throw SpecError("n_slots must be at least 1");
  if (!(spec.pairwise_corr >= 0.0) || !(spec.pairwise_corr < 1.0))
    throw SpecError("pairwise correlation must lie in [0, 1)");
  if (!(spec.per_slot_sigma >= 0.0)) throw SpecError("sigma must be non-negative");
  if (!(spec.initial_price > 0.0)) throw SpecError("initial price must be positive");

  auto n = static_cast<Eigen::Index>(spec.n_assets);
  Eigen::MatrixXd corr = Eigen::MatrixXd::Constant(n, n, spec.pairwise_corr);
  corr.diagonal().setOnes();
  Eigen::LLT<Eigen::MatrixXd> llt(corr);
  if (llt.info() != Eigen::Success)
    throw SpecError("correlation matrix is not positive definite");
  Eigen::MatrixXd L = llt.matrixL();

  detail::NormalSource noise(spec.seed);
  std::vector<double> logp(spec.n_assets, std::log(spec.initial_price));

  std::vector<IntervalSeries> out(spec.n_assets);
  for (std::size_t i = 0; i < spec.n_assets; ++i) {
    out[i].asset = synth_asset_name(spec.prefix, i, spec.n_assets);
    out[i].kind = SeriesKind::price;
    out[i].dt = spec.dt;
    out[i].origin = spec.origin;
    out[i].values.reserve(spec.n_slots);
    out[i].values.emplace_back(spec.start_slot, spec.initial_price);
  }

  Eigen::VectorXd z(n);
  for (std::size_t t = 1; t < spec.n_slots; ++t) {
    for (Eigen::Index i = 0; i < n; ++i) z(i) = noise.normal();
    Eigen::VectorXd corr_z = L * z;
    for (std::size_t i = 0; i < spec.n_assets; ++i) {
      logp[i] += spec.drift + spec.per_slot_sigma * corr_z(static_cast<Eigen::Index>(i));
      out[i].values.emplace_back(spec.start_slot + static_cast<std::int64_t>(t),
                                 std::exp(logp[i]));
    }
  }
  return out;
}

// Multiply values by the effect profile: step scales everything from onset,
// spike scales the onset slot only, decay scales slot onset+j by
// (1 + m * 0.5^j) so the series halves its distance to baseline each slot.
inline IntervalSeries inject(const IntervalSeries& series, const Effect& effect) {
  if (series.values.empty()) throw EmptySeries("cannot inject into an empty series");
  if (effect.onset_slot < series.values.front().first ||
      effect.onset_slot > series.values.back().first)
    throw std::invalid_argument("onset slot outside series");
  IntervalSeries out = series;
  for (auto& [slot, v] : out.values) {
    if (slot < effect.onset_slot) continue;
    switch (effect.shape) {
      case EffectShape::step:
        v *= 1.0 + effect.magnitude;
        break;
      case EffectShape::spike:
        if (slot == effect.onset_slot) v *= 1.0 + effect.magnitude;
        break;
      case EffectShape::decay: {
        auto j = static_cast<double>(slot - effect.onset_slot);
        v *= 1.0 + effect.magnitude * std::pow(0.5, j);
        break;
      }
    }
  }
  return out;
}

}  // namespace dexdid
