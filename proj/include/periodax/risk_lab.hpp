#ifndef PERIODAX_RISK_LAB_HPP
#define PERIODAX_RISK_LAB_HPP

/// @file
/// Seeded Monte Carlo evaluation of the normalized risk E[(est - theta)^2 I_T]
/// against the second-order prediction 1 + R_T(f, lambda) / ||f'||^2.
///
/// Every replication draws its own seed from (master_seed, rep_index), results
/// land in per-replication slots and are aggregated in index order, so reports
/// do not depend on the number of workers.

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "periodax/estimator.hpp"
#include "periodax/parallel.hpp"
#include "periodax/weights.hpp"

namespace periodax {

enum class EstimatorKind { theta_star, one_step_oracle };

inline std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

inline std::uint64_t replication_seed(std::uint64_t master, std::uint64_t rep) noexcept {
  return splitmix64(master ^ splitmix64(rep + 0x632BE59BD9B4E019ULL));
}

/// Replications whose scaled error |est - theta| sqrt(I_T) exceeds this are
/// counted as large deviations and kept out of the second-order comparison.
inline constexpr double outlier_threshold = 10.0;

struct ExperimentConfig {
  /// f, theta, T, noise and oversampling; seed, K_max and alpha_lo are filled per replication.
  SimulationConfig sim;
  WeightSequence weights;
  /// Set when the weights came from a Pinsker solution (reported alongside).
  std::optional<PinskerSolution> pinsker;
  EstimatorConfig est;
  int n_reps = 100;
  std::uint64_t master_seed = 1;
  EstimatorKind kind = EstimatorKind::theta_star;
  int workers = 1;

  void validate() const {
    if (n_reps < 2) throw ConfigError("experiment needs n_reps >= 2");
    weights.require_valid();
    est.validate();
    if (!(sim.theta > est.theta_lo && sim.theta < est.theta_hi))
      throw ConfigError("true period must lie inside the search interval");
  }

  /// Simulation settings of replication `rep`.
  SimulationConfig replication(int rep) const {
    SimulationConfig s = sim;
    s.K_max = std::max({sim.K_max, sim.f.max_freq(), weights.max_weighted_freq()});
    s.alpha_lo = est.theta_lo;
    s.seed = replication_seed(master_seed, static_cast<std::uint64_t>(rep));
    if (kind == EstimatorKind::one_step_oracle) s.keep_noise = true;
    return s;
  }
};

struct RiskReport {
  double normalized_risk = 0.0;      ///< mean over retained replications
  double std_error = 0.0;
  double normalized_risk_all = 0.0;  ///< mean including large deviations
  double predicted = 0.0;            ///< 1 + R_T / ||f'||^2
  double first_order = 1.0;
  double second_order_predicted = 0.0;
  double second_order_measured = 0.0;
  double R_T = 0.0;
  double fisher = 0.0;
  double deriv_norm_sq = 0.0;
  std::optional<double> r_T;
  int n_reps = 0;
  int n_effective = 0;
  int outlier_count = 0;
  double mean_scaled_error = 0.0;  ///< mean of (est - theta) sqrt(I_T), retained replications
};

namespace detail {

struct MeanSe {
  double mean = 0.0;
  double se = 0.0;
};

inline MeanSe mean_and_se(const std::vector<double>& x) {
  const auto n = static_cast<double>(x.size());
  if (x.empty()) return {std::numeric_limits<double>::quiet_NaN(), std::numeric_limits<double>::quiet_NaN()};
  const double mean = pairwise_sum(x) / n;
  std::vector<double> dev(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) dev[i] = (x[i] - mean) * (x[i] - mean);
  const double var = x.size() > 1 ? pairwise_sum(dev) / (n - 1.0) : 0.0;
  return {mean, std::sqrt(var / n)};
}

inline double run_estimator(const ExperimentConfig& cfg, const ObservationRecord& obs, EstimatorKind kind) {
  if (kind == EstimatorKind::theta_star) return estimate_period(obs, cfg.weights, cfg.est).theta_star;
  return one_step_oracle(obs, cfg.sim.f, cfg.sim.theta, cfg.weights, {cfg.est.theta_lo, cfg.est.theta_hi});
}

}  // namespace detail

/// Estimates of every replication, in replication order.
inline std::vector<double> run_replications(const ExperimentConfig& cfg) {
  cfg.validate();
  std::vector<double> est(static_cast<std::size_t>(cfg.n_reps), 0.0);
  parallel_for(est.size(), cfg.workers, [&](std::size_t r) {
    const auto obs = simulate_observation(cfg.replication(static_cast<int>(r)));
    est[r] = detail::run_estimator(cfg, obs, cfg.kind);
  });
  return est;
}

inline RiskReport summarize_risk(const ExperimentConfig& cfg, const std::vector<double>& estimates) {
  RiskReport rep;
  const double theta = cfg.sim.theta;
  rep.fisher = fisher_information(cfg.sim.f, theta, cfg.sim.T);
  rep.deriv_norm_sq = deriv_norm_sq(cfg.sim.f, 1);
  rep.R_T = risk_functional(cfg.sim.f, cfg.weights, cfg.sim.T);
  rep.second_order_predicted = rep.R_T / rep.deriv_norm_sq;
  rep.predicted = 1.0 + rep.second_order_predicted;
  if (cfg.pinsker) rep.r_T = cfg.pinsker->r_T;
  rep.n_reps = static_cast<int>(estimates.size());

  std::vector<double> kept, all, scaled;
  const double s = std::sqrt(rep.fisher);
  for (double e : estimates) {
    const double z = (e - theta) * s;
    all.push_back(z * z);
    if (std::abs(z) > outlier_threshold) {
      ++rep.outlier_count;
      continue;
    }
    kept.push_back(z * z);
    scaled.push_back(z);
  }
  rep.n_effective = static_cast<int>(kept.size());
  const auto ms = detail::mean_and_se(kept);
  rep.normalized_risk = ms.mean;
  rep.std_error = ms.se;
  rep.normalized_risk_all = detail::mean_and_se(all).mean;
  rep.second_order_measured = rep.normalized_risk - 1.0;
  rep.mean_scaled_error = detail::mean_and_se(scaled).mean;
  return rep;
}

inline RiskReport run_mc_risk(const ExperimentConfig& cfg) { return summarize_risk(cfg, run_replications(cfg)); }

struct PairedReport {
  int n_reps = 0;
  int n_effective = 0;
  double mean_sq_diff = 0.0;  ///< mean (theta* - tau_hat)^2 I_T
  double std_error = 0.0;
  double second_order_predicted = 0.0;
  double ratio_to_second_order = 0.0;
  double correlation = 0.0;  ///< of (theta* - theta) and (tau_hat - theta)
  double risk_theta_star = 0.0;
  double risk_one_step = 0.0;
};

/// theta* and tau_hat on the same records. Replications where either estimate
/// is a large deviation are excluded from every aggregate.
inline PairedReport compare_estimators(const ExperimentConfig& base) {
  ExperimentConfig cfg = base;
  cfg.kind = EstimatorKind::one_step_oracle;  // forces noise retention
  cfg.validate();
  const auto n = static_cast<std::size_t>(cfg.n_reps);
  std::vector<double> star(n), hat(n);
  parallel_for(n, cfg.workers, [&](std::size_t r) {
    const auto obs = simulate_observation(cfg.replication(static_cast<int>(r)));
    star[r] = detail::run_estimator(cfg, obs, EstimatorKind::theta_star);
    hat[r] = detail::run_estimator(cfg, obs, EstimatorKind::one_step_oracle);
  });

  PairedReport rep;
  rep.n_reps = cfg.n_reps;
  const double theta = cfg.sim.theta;
  const double s = std::sqrt(fisher_information(cfg.sim.f, theta, cfg.sim.T));
  rep.second_order_predicted =
      risk_functional(cfg.sim.f, cfg.weights, cfg.sim.T) / deriv_norm_sq(cfg.sim.f, 1);
  std::vector<double> d2, a, b, a2, b2, ab;
  for (std::size_t r = 0; r < n; ++r) {
    const double za = (star[r] - theta) * s, zb = (hat[r] - theta) * s;
    if (std::abs(za) > outlier_threshold || std::abs(zb) > outlier_threshold) continue;
    d2.push_back((za - zb) * (za - zb));
    a.push_back(za);
    b.push_back(zb);
    a2.push_back(za * za);
    b2.push_back(zb * zb);
  }
  rep.n_effective = static_cast<int>(d2.size());
  const auto md = detail::mean_and_se(d2);
  rep.mean_sq_diff = md.mean;
  rep.std_error = md.se;
  rep.ratio_to_second_order = rep.mean_sq_diff / rep.second_order_predicted;
  rep.risk_theta_star = detail::mean_and_se(a2).mean;
  rep.risk_one_step = detail::mean_and_se(b2).mean;
  const double ma = detail::mean_and_se(a).mean, mb = detail::mean_and_se(b).mean;
  for (std::size_t i = 0; i < a.size(); ++i) ab.push_back((a[i] - ma) * (b[i] - mb));
  for (auto& v : a) v = (v - ma) * (v - ma);
  for (auto& v : b) v = (v - mb) * (v - mb);
  rep.correlation = pairwise_sum(ab) / std::sqrt(pairwise_sum(a) * pairwise_sum(b));
  return rep;
}

/// How weights are rebuilt at each T of a rate curve.
struct WeightScheme {
  enum class Kind { pinsker, projection } kind = Kind::pinsker;
  double beta = 2.0;
  double L = 1.0;
  int N = 2;

  static WeightScheme make_pinsker(double beta, double L) { return {Kind::pinsker, beta, L, 2}; }
  static WeightScheme make_projection(int N) { return {Kind::projection, 2.0, 1.0, N}; }
};

struct CurveRow {
  double T = 0.0;
  std::optional<double> r_T;
  double R_T = 0.0;
  double second_order_predicted = 0.0;
  std::optional<double> second_order_measured;
  std::optional<double> std_error;
};

struct CurveTable {
  std::vector<CurveRow> rows;
  /// Least-squares slope of log(r_T) (Pinsker) or log(R_T) (projection) against log T.
  double fitted_slope = 0.0;
};

inline double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const auto n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

/// Predicted (and, when measure_reps > 0, Monte Carlo) second-order term per T.
inline CurveTable second_order_curve(const ExperimentConfig& base, const std::vector<double>& T_list,
                                     const WeightScheme& scheme, int measure_reps = 0) {
  if (T_list.size() < 3) throw ConfigError("rate curve needs at least 3 values of T");
  for (std::size_t i = 1; i < T_list.size(); ++i)
    if (!(T_list[i] > T_list[i - 1])) throw ConfigError("rate curve T list must be increasing");

  CurveTable table;
  std::vector<double> xs, ys;
  const double fnorm = deriv_norm_sq(base.sim.f, 1);
  for (double T : T_list) {
    CurveRow row;
    row.T = T;
    WeightSequence w;
    std::optional<PinskerSolution> ps;
    if (scheme.kind == WeightScheme::Kind::pinsker) {
      ps = pinsker_solution(scheme.beta, scheme.L, T);
      w = ps->lambda_star;
      row.r_T = ps->r_T;
    } else {
      w = projection_weights(scheme.N);
    }
    row.R_T = risk_functional(base.sim.f, w, T);
    row.second_order_predicted = row.R_T / fnorm;
    if (measure_reps > 0) {
      ExperimentConfig cfg = base;
      cfg.sim.T = T;
      cfg.weights = w;
      cfg.pinsker = ps;
      cfg.n_reps = measure_reps;
      const auto rep = run_mc_risk(cfg);
      row.second_order_measured = rep.second_order_measured;
      row.std_error = rep.std_error;
    }
    xs.push_back(T);
    ys.push_back(row.r_T ? *row.r_T : row.R_T);
    table.rows.push_back(row);
  }
  table.fitted_slope = loglog_slope(xs, ys);
  return table;
}

}  // namespace periodax

#endif  // PERIODAX_RISK_LAB_HPP
