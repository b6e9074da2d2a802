#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <boost/math/distributions/students_t.hpp>

#include "dexdid/aggregate.hpp"
#include "dexdid/errors.hpp"
#include "dexdid/types.hpp"

/*
 * Dynamic difference-in-differences on a long-format event panel:
 *
 *   y_{a,t} = a0 + b_a + b_t + sum_t' g_{t'} D_{a,t'} + e_{a,t}
 *
 * with D_{a,t'} = 1 only for the treated asset at slot t'. One asset dummy
 * (first control, lexicographic) and one time dummy (the anchor slot) are
 * dropped as references; the anchor slot carries no interaction, so every
 * g_{t'} reads as the treated-vs-control gap relative to the anchor.
 *
 * Standard errors cluster at the asset level with CR1 small-sample scaling;
 * p-values come from a t distribution with (clusters - 1) degrees of
 * freedom.
 */

namespace dexdid {

struct PanelSpec {
  std::int64_t event_id = 0;
  SeriesKind kind = SeriesKind::price;
  SlotRange analysis_span{-40, 8};  // W^S union W^E at 6-hour slots
  SlotRange event_window{-4, 8};
  SlotRange short_window{-40, -4};
  std::int64_t anchor_slot = -4;    // first slot of the event window
  std::int64_t dt = 21600;
};

struct PanelObs {
  std::string asset;
  std::int64_t slot = 0;
  double y = 0.0;
};

struct Panel {
  std::int64_t event_id = 0;
  SeriesKind kind = SeriesKind::price;
  std::string treated_asset;
  std::vector<std::string> assets;  // sorted, treated included
  std::vector<PanelObs> observations;
  std::vector<std::string> dropped_controls;
};

// Stack normalized treated + control series over the analysis span. Series
// arrive aggregated; normalization at the first short-window slot happens
// here so that a missing or zero base aborts the event (treated) or drops
// the asset (control).
inline Panel build_panel(std::int64_t event_id, const IntervalSeries& treated,
                         const std::vector<IntervalSeries>& controls, const PanelSpec& spec) {
  if (!spec.analysis_span.contains(spec.anchor_slot))
    throw std::invalid_argument("anchor slot outside analysis span");
  std::int64_t t_s = spec.short_window.lo;

  Panel panel;
  panel.event_id = event_id;
  panel.kind = spec.kind;
  panel.treated_asset = treated.asset;

  auto append = [&](const IntervalSeries& normalized) {
    for (const auto& [slot, v] : normalized.values)
      if (spec.analysis_span.contains(slot))
        panel.observations.push_back({normalized.asset, slot, v});
  };

  try {
    append(spec.kind == SeriesKind::cumulative_volume
               ? normalize_cumulative(treated, t_s, spec.short_window)
               : normalize_at(treated, t_s));
  } catch (const CannotNormalize& e) {
    throw EventAborted("event " + std::to_string(event_id) +
                       ": treated asset cannot be normalized: " + e.what());
  }

  for (const auto& control : controls) {
    try {
      append(spec.kind == SeriesKind::cumulative_volume
                 ? normalize_cumulative(control, t_s, spec.short_window)
                 : normalize_at(control, t_s));
    } catch (const CannotNormalize&) {
      panel.dropped_controls.push_back(control.asset);
    }
  }

  std::set<std::string> seen;
  for (const auto& obs : panel.observations) seen.insert(obs.asset);
  panel.assets.assign(seen.begin(), seen.end());
  if (panel.assets.size() < 2)
    throw EventAborted("event " + std::to_string(event_id) + ": no usable control assets");
  return panel;
}

struct OlsFit {
  Eigen::VectorXd beta;
  Eigen::VectorXd residuals;
  std::vector<std::string> column_names;
};

// Least squares via rank-revealing QR. Rank deficiency names the offending
// columns instead of silently picking a solution.
inline OlsFit fit_ols(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                      const std::vector<std::string>& column_names) {
  if (X.rows() != y.size()) throw std::invalid_argument("design/response size mismatch");
  if (static_cast<std::size_t>(X.cols()) != column_names.size())
    throw std::invalid_argument("column name count mismatch");
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(X);
  // Rank decisions use a fixed relative threshold so fits are reproducible
  // across Eigen versions.
  qr.setThreshold(1e-10);
  if (qr.rank() < X.cols()) {
    CollinearityError err("design matrix rank " + std::to_string(qr.rank()) + " of " +
                          std::to_string(X.cols()));
    const auto& perm = qr.colsPermutation().indices();
    for (Eigen::Index i = qr.rank(); i < X.cols(); ++i)
      err.columns.push_back(column_names[static_cast<std::size_t>(perm[i])]);
    throw err;
  }
  OlsFit fit;
  fit.beta = qr.solve(y);
  fit.residuals = y - X * fit.beta;
  fit.column_names = column_names;
  return fit;
}

// CR1 cluster-robust covariance:
//   (G/(G-1)) * ((N-1)/(N-k)) * (X'X)^-1 [ sum_g (X_g'u_g)(X_g'u_g)' ] (X'X)^-1
inline Eigen::MatrixXd cluster_robust_cov(const Eigen::MatrixXd& X,
                                          const Eigen::VectorXd& residuals,
                                          const std::vector<std::string>& cluster_labels) {
  if (static_cast<std::size_t>(X.rows()) != cluster_labels.size())
    throw std::invalid_argument("cluster label count mismatch");
  std::map<std::string, std::vector<Eigen::Index>> groups;
  for (Eigen::Index i = 0; i < X.rows(); ++i) groups[cluster_labels[static_cast<std::size_t>(i)]].push_back(i);
  std::size_t G = groups.size();
  if (G < 2) throw TooFewClusters("need at least 2 clusters, have " + std::to_string(G));

  Eigen::Index n = X.rows(), k = X.cols();
  Eigen::MatrixXd meat = Eigen::MatrixXd::Zero(k, k);
  for (const auto& [label, rows] : groups) {
    Eigen::VectorXd score = Eigen::VectorXd::Zero(k);
    for (Eigen::Index i : rows) score += X.row(i).transpose() * residuals(i);
    meat += score * score.transpose();
  }
  Eigen::MatrixXd xtx = X.transpose() * X;
  Eigen::MatrixXd bread = xtx.ldlt().solve(Eigen::MatrixXd::Identity(k, k));
  double g = static_cast<double>(G);
  double factor = (g / (g - 1.0)) * (static_cast<double>(n - 1) / static_cast<double>(n - k));
  return factor * bread * meat * bread;
}

struct GammaStat {
  double estimate = 0.0;
  double se = 0.0;
  double t_stat = 0.0;
  double p_value = 1.0;
};

struct DiDFit {
  std::int64_t event_id = 0;
  SeriesKind kind = SeriesKind::price;
  double alpha0 = 0.0;
  std::map<std::string, double> asset_effects;
  std::map<std::int64_t, double> time_effects;
  std::map<std::int64_t, GammaStat> gamma;
  std::vector<double> residuals;
  std::size_t n_clusters = 0;
  std::size_t dof = 0;  // inference df: clusters - 1
  std::size_t n_obs = 0;
};

inline std::string classify(double p_value) {
  if (!(p_value >= 0.0) || p_value > 1.0)
    throw std::invalid_argument("p-value outside [0, 1]");
  if (p_value < 0.001) return "***";
  if (p_value < 0.01) return "**";
  if (p_value < 0.05) return "*";
  if (p_value < 0.1) return "·";
  return "ns";
}

inline DiDFit fit_dynamic_did(const Panel& panel, const PanelSpec& spec) {
  if (panel.assets.size() < 2) throw TooFewClusters("panel has fewer than 2 assets");

  // Reference categories: first control asset (lexicographic) and the anchor
  // slot. Gamma columns exist only where the treated asset is observed.
  std::string ref_asset;
  for (const auto& a : panel.assets)
    if (a != panel.treated_asset) {
      ref_asset = a;
      break;
    }

  std::set<std::int64_t> slots_seen;
  std::set<std::int64_t> treated_slots;
  for (const auto& obs : panel.observations) {
    slots_seen.insert(obs.slot);
    if (obs.asset == panel.treated_asset) treated_slots.insert(obs.slot);
  }
  if (!slots_seen.count(spec.anchor_slot))
    throw EventAborted("event " + std::to_string(panel.event_id) +
                       ": no observation at anchor slot");

  std::vector<std::string> asset_cols;
  for (const auto& a : panel.assets)
    if (a != ref_asset) asset_cols.push_back(a);
  std::vector<std::int64_t> time_cols;
  for (std::int64_t s : slots_seen)
    if (s != spec.anchor_slot) time_cols.push_back(s);
  std::vector<std::int64_t> gamma_cols;
  for (std::int64_t s : treated_slots)
    if (s != spec.anchor_slot) gamma_cols.push_back(s);

  Eigen::Index n = static_cast<Eigen::Index>(panel.observations.size());
  Eigen::Index k = static_cast<Eigen::Index>(1 + asset_cols.size() + time_cols.size() +
                                             gamma_cols.size());
  if (n <= k)
    throw EventAborted("event " + std::to_string(panel.event_id) + ": " + std::to_string(n) +
                       " observations for " + std::to_string(k) + " coefficients");

  std::map<std::string, Eigen::Index> asset_ix;
  for (std::size_t i = 0; i < asset_cols.size(); ++i)
    asset_ix[asset_cols[i]] = static_cast<Eigen::Index>(1 + i);
  std::map<std::int64_t, Eigen::Index> time_ix;
  for (std::size_t i = 0; i < time_cols.size(); ++i)
    time_ix[time_cols[i]] = static_cast<Eigen::Index>(1 + asset_cols.size() + i);
  std::map<std::int64_t, Eigen::Index> gamma_ix;
  for (std::size_t i = 0; i < gamma_cols.size(); ++i)
    gamma_ix[gamma_cols[i]] = static_cast<Eigen::Index>(1 + asset_cols.size() + time_cols.size() + i);

  std::vector<std::string> names;
  names.reserve(static_cast<std::size_t>(k));
  names.push_back("const");
  for (const auto& a : asset_cols) names.push_back("asset:" + a);
  for (std::int64_t s : time_cols) names.push_back("slot:" + std::to_string(s));
  for (std::int64_t s : gamma_cols) names.push_back("gamma:" + std::to_string(s));

  Eigen::MatrixXd X = Eigen::MatrixXd::Zero(n, k);
  Eigen::VectorXd y(n);
  std::vector<std::string> clusters(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& obs = panel.observations[static_cast<std::size_t>(i)];
    X(i, 0) = 1.0;
    if (auto it = asset_ix.find(obs.asset); it != asset_ix.end()) X(i, it->second) = 1.0;
    if (auto it = time_ix.find(obs.slot); it != time_ix.end()) X(i, it->second) = 1.0;
    if (obs.asset == panel.treated_asset)
      if (auto it = gamma_ix.find(obs.slot); it != gamma_ix.end()) X(i, it->second) = 1.0;
    y(i) = obs.y;
    clusters[static_cast<std::size_t>(i)] = obs.asset;
  }

  OlsFit ols = fit_ols(X, y, names);
  Eigen::MatrixXd cov = cluster_robust_cov(X, ols.residuals, clusters);

  DiDFit fit;
  fit.event_id = panel.event_id;
  fit.kind = panel.kind;
  fit.alpha0 = ols.beta(0);
  for (const auto& [a, ix] : asset_ix) fit.asset_effects[a] = ols.beta(ix);
  for (const auto& [s, ix] : time_ix) fit.time_effects[s] = ols.beta(ix);
  fit.residuals.assign(ols.residuals.data(), ols.residuals.data() + ols.residuals.size());
  fit.n_clusters = panel.assets.size();
  fit.dof = fit.n_clusters - 1;
  fit.n_obs = static_cast<std::size_t>(n);

  boost::math::students_t dist(static_cast<double>(fit.dof));
  for (const auto& [s, ix] : gamma_ix) {
    GammaStat g;
    g.estimate = ols.beta(ix);
    double var = cov(ix, ix);
    g.se = var > 0.0 ? std::sqrt(var) : 0.0;
    if (g.se > 0.0) {
      g.t_stat = g.estimate / g.se;
      g.p_value = 2.0 * boost::math::cdf(boost::math::complement(dist, std::fabs(g.t_stat)));
    } else {
      // Exact fits collapse the variance; treat a nonzero coefficient as
      // unambiguous and a zero one as null.
      g.t_stat = 0.0;
      g.p_value = g.estimate == 0.0 ? 1.0 : 0.0;
    }
    fit.gamma[s] = g;
  }
  return fit;
}

}  // namespace dexdid
