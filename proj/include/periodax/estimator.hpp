#ifndef PERIODAX_ESTIMATOR_HPP
#define PERIODAX_ESTIMATOR_HPP

/// @file
/// Three-stage period estimator: scan L over Theta, keep the threshold set
///   E_T = {tau : L(tau) >= (1 - log^{-1/4} T) sup L},
/// take its smallest member e_T, then maximize L over the multiplicative ball
///   B(e_T, 1/4) = {tau in Theta : |e_T / tau - 1| < 1/4}.
/// Taking the smallest member defeats the harmonic trap L(j theta) ~ L(theta).

#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <vector>

#include "periodax/criterion.hpp"
#include "periodax/error.hpp"
#include "periodax/golden.hpp"
#include "periodax/parallel.hpp"

namespace periodax {

struct EstimatorConfig {
  double theta_lo = 0.5;
  double theta_hi = 2.0;
  double grid_step_divisor = 8.0;
  double threshold_exponent = 0.25;
  std::optional<double> threshold_override;
  double refine_rel_tol = 1e-9;
  std::size_t max_grid_points = 10'000'000;
  int workers = 1;

  void validate() const {
    if (!(theta_lo > 0.0) || !(theta_lo < theta_hi)) throw ConfigError("estimator needs 0 < theta_lo < theta_hi");
    if (!(grid_step_divisor > 0.0)) throw ConfigError("grid_step_divisor must be positive");
    if (!(threshold_exponent > 0.0)) throw ConfigError("threshold_exponent must be positive");
    if (threshold_override && !(*threshold_override > 0.0 && *threshold_override < 1.0))
      throw ConfigError("threshold_override must lie in (0, 1)");
    if (!(refine_rel_tol > 0.0)) throw ConfigError("refine_rel_tol must be positive");
  }

  /// Growth of Theta with T; advisory only since one run has a single T.
  double lower_growth_ratio(double T) const { return 1.0 / (theta_lo * T); }
  double upper_growth_ratio(double T) const { return theta_hi / std::log(T); }
};

/// Coarse grid step theta_lo^2 / (c_grid T K_eff).
inline double scan_step(const EstimatorConfig& cfg, double T, const WeightSequence& w) {
  const int K = std::max(w.max_weighted_freq(), 1);
  return cfg.theta_lo * cfg.theta_lo / (cfg.grid_step_divisor * T * K);
}

inline bool in_ball(double center, double tau, double radius) { return std::abs(center / tau - 1.0) < radius; }

/// L on the uniform grid theta_lo + i * step, with theta_hi appended when the
/// grid does not land on it. Grid partitioning never changes the values.
inline CriterionProfile scan_criterion(const ObservationRecord& obs, const WeightSequence& w,
                                       const EstimatorConfig& cfg) {
  cfg.validate();
  if (w.max_weighted_freq() > obs.capacity(cfg.theta_lo))
    throw RuntimeFault("record capacity does not cover the weighted harmonics at theta_lo");
  CriterionProfile prof;
  prof.step = scan_step(cfg, obs.T, w);
  const double span = cfg.theta_hi - cfg.theta_lo;
  const double cells = std::floor(span / prof.step * (1.0 + 1e-12));
  if (cells + 2.0 > static_cast<double>(cfg.max_grid_points))
    throw RuntimeFault("criterion scan exceeds the grid point budget");
  auto n = static_cast<std::size_t>(cells) + 1;
  prof.taus.resize(n);
  for (std::size_t i = 0; i < n; ++i) prof.taus[i] = cfg.theta_lo + static_cast<double>(i) * prof.step;
  if (cfg.theta_hi - prof.taus.back() > 1e-12 * cfg.theta_hi) prof.taus.push_back(cfg.theta_hi);
  prof.values.assign(prof.taus.size(), 0.0);
  parallel_for(prof.taus.size(), cfg.workers,
               [&](std::size_t i) { prof.values[i] = criterion_L(obs, w, prof.taus[i]); });
  prof.finalize();
  return prof;
}

struct ThresholdSet {
  double factor = 0.0;
  double value = 0.0;
  std::vector<double> members;
  double e_T = 0.0;
};

inline ThresholdSet threshold_set(const CriterionProfile& profile, double T, const EstimatorConfig& cfg) {
  if (profile.values.empty()) throw ConfigError("threshold_set needs a nonempty profile");
  ThresholdSet ts;
  ts.factor = cfg.threshold_override ? *cfg.threshold_override
                                     : 1.0 - std::pow(std::log(T), -cfg.threshold_exponent);
  ts.value = ts.factor * profile.sup_value;
  for (std::size_t i = 0; i < profile.values.size(); ++i)
    if (profile.values[i] >= ts.value) ts.members.push_back(profile.taus[i]);
  ts.e_T = ts.members.front();  // taus ascend; argmax always qualifies
  return ts;
}

struct EstimatorTrace {
  CriterionProfile profile;
  double threshold_factor = 0.0;
  double threshold_value = 0.0;
  std::vector<double> E_T_members;
  double e_T = 0.0;
  double ball_lo = 0.0;  ///< open ball (e_T / 1.25, e_T / 0.75) intersected with Theta
  double ball_hi = 0.0;
  double grid_best_tau = 0.0;
  double theta_star = 0.0;
  double L_star = 0.0;
  int refine_iters = 0;
  double lower_growth_ratio = 0.0;
  double upper_growth_ratio = 0.0;
};

inline EstimatorTrace estimate_period(const ObservationRecord& obs, const WeightSequence& w,
                                      const EstimatorConfig& cfg) {
  w.require_valid();
  EstimatorTrace tr;
  tr.profile = scan_criterion(obs, w, cfg);
  auto ts = threshold_set(tr.profile, obs.T, cfg);
  tr.threshold_factor = ts.factor;
  tr.threshold_value = ts.value;
  tr.E_T_members = std::move(ts.members);
  tr.e_T = ts.e_T;
  tr.ball_lo = std::max(cfg.theta_lo, tr.e_T / 1.25);
  tr.ball_hi = std::min(cfg.theta_hi, tr.e_T / 0.75);
  tr.lower_growth_ratio = cfg.lower_growth_ratio(obs.T);
  tr.upper_growth_ratio = cfg.upper_growth_ratio(obs.T);

  const auto& taus = tr.profile.taus;
  const auto& vals = tr.profile.values;
  double best_val = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < taus.size(); ++i) {
    if (!in_ball(tr.e_T, taus[i], 0.25)) continue;
    if (vals[i] > best_val) {
      best_val = vals[i];
      tr.grid_best_tau = taus[i];
    }
  }

  const double step = tr.profile.step;
  const double a = std::max(tr.grid_best_tau - step, tr.ball_lo);
  const double b = std::min(tr.grid_best_tau + step, tr.ball_hi);
  auto L = [&](double tau) { return criterion_L(obs, w, tau); };
  const auto g = golden_section_maximize(L, a, b, cfg.refine_rel_tol);
  tr.refine_iters = g.iterations;
  if (g.fx >= best_val && in_ball(tr.e_T, g.x, 0.25)) {
    tr.theta_star = g.x;
    tr.L_star = g.fx;
  } else {
    tr.theta_star = tr.grid_best_tau;
    tr.L_star = best_val;
  }
  return tr;
}

/// One-step oracle tau_hat = theta - L'(theta) / E L''(theta), with
/// E L''(theta) = Gamma''(theta) / 2 from the exact Gamma. Needs the truth,
/// so it is a diagnostic rather than an estimator.
inline double one_step_oracle(const ObservationRecord& obs, const PeriodicSignal& f, double theta,
                              const WeightSequence& w, ProbeInterval range = {}) {
  if (!(theta > range.lo && theta < range.hi)) throw RuntimeFault("theta outside the probed range");
  const double d1 = criterion_derivs(obs, w, theta, 1, range);
  const auto curv = gamma_curvature_check(f, theta, w, obs.T);
  return theta - d1 / (0.5 * curv.gamma_second);
}

}  // namespace periodax

#endif  // PERIODAX_ESTIMATOR_HPP
