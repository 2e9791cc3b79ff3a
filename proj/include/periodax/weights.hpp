#ifndef PERIODAX_WEIGHTS_HPP
#define PERIODAX_WEIGHTS_HPP

/// @file
/// Weight sequences lambda_k for the weighted criterion, the Pinsker minimax
/// solution over a Sobolev ellipsoid, the nonparametric risk functional
///   R_T(f, lambda) = sum_k (2 pi k)^2 ((1 - lambda_k)^2 |c_k|^2 + lambda_k^2 / T)
/// and the (weighted) Fisher informations.

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "periodax/error.hpp"
#include "periodax/signal.hpp"

namespace periodax {

/// Symmetric weights (lambda_{-k} = lambda_k) stored for k = 0 .. N_T - 1;
/// lambda_k = 0 for k >= N_T.
///
/// The type itself does not enforce lambda_0 = 0, lambda_1 = 1 so that
/// validators and pure-math evaluations can receive any sequence;
/// structural_error() reports the violation.
class WeightSequence {
public:
  WeightSequence() = default;
  explicit WeightSequence(std::vector<double> lambda) : lambda_(std::move(lambda)) {
    while (!lambda_.empty() && lambda_.back() == 0.0) lambda_.pop_back();
  }

  /// lambda_{|k|}.
  double operator()(int k) const noexcept {
    const auto a = static_cast<std::size_t>(k < 0 ? -k : k);
    return a < lambda_.size() ? lambda_[a] : 0.0;
  }

  /// Cutoff: lambda_k = 0 for all k >= N_T.
  int cutoff() const noexcept { return static_cast<int>(lambda_.size()); }

  /// Highest frequency with nonzero weight (0 when all weights vanish).
  int max_weighted_freq() const noexcept { return std::max(cutoff() - 1, 0); }

  const std::vector<double>& values() const noexcept { return lambda_; }

  std::optional<std::string> structural_error() const {
    if (lambda_.size() < 2 || lambda_[1] != 1.0) return "lambda_1 must equal 1";
    if (lambda_[0] != 0.0) return "lambda_0 must equal 0";
    for (std::size_t k = 0; k < lambda_.size(); ++k)
      if (!(lambda_[k] >= 0.0 && lambda_[k] <= 1.0))
        return "lambda_" + std::to_string(k) + " outside [0, 1]";
    return std::nullopt;
  }

  void require_valid() const {
    if (auto err = structural_error()) throw ConfigError("invalid weight sequence: " + *err);
  }

private:
  std::vector<double> lambda_;
};

/// lambda_k = 1 for 1 <= k < N, 0 otherwise.
inline WeightSequence projection_weights(int N) {
  if (N < 2) throw ConfigError("projection weights need N >= 2 so that lambda_1 = 1");
  std::vector<double> lambda(static_cast<std::size_t>(N), 1.0);
  lambda[0] = 0.0;
  return WeightSequence(std::move(lambda));
}

namespace detail {

// (1/T) sum_{k != 0} [(W/|k|)^{beta-1} - 1]_+ (2 pi |k|)^{2 beta} at W = 1 + u.
// Written in terms of the excess u so it stays accurate as W approaches 1.
inline double pinsker_lhs_excess(double u, double beta, double T) {
  if (!(u > 0.0)) return 0.0;
  double s = 0.0;
  for (int k = 1; static_cast<double>(k) < 1.0 + u; ++k) {
    const double d = ((1.0 - k) + u) / k;  // W/k - 1
    if (d <= 0.0) continue;
    s += std::expm1((beta - 1.0) * std::log1p(d)) * std::pow(two_pi * k, 2.0 * beta);
  }
  return 2.0 * s / T;
}

inline double pinsker_lhs(double W, double beta, double T) { return pinsker_lhs_excess(W - 1.0, beta, T); }

}  // namespace detail

/// Excess u = W_T - 1 of the Pinsker root, by bracketed bisection to a
/// residual of 1e-10 * L. The left side vanishes on W <= 1 and increases
/// without bound. Solving for u keeps full relative precision when W_T is
/// close to 1, where the left side is steep in W.
inline double solve_WT_excess(double beta, double L, double T) {
  if (!(beta >= 2.0)) throw ConfigError("Pinsker solver needs beta >= 2");
  if (!(L > 0.0)) throw ConfigError("Pinsker solver needs L > 0");
  if (!(T > 0.0)) throw ConfigError("Pinsker solver needs T > 0");

  double lo = 0.0;
  double hi = 1.0;
  while (detail::pinsker_lhs_excess(hi, beta, T) <= L) {
    lo = hi;
    hi *= 2.0;
  }
  const double tol = 1e-10 * L;
  double mid = 0.5 * (lo + hi);
  for (int it = 0; it < 4000; ++it) {
    mid = 0.5 * (lo + hi);
    if (!(lo < mid && mid < hi)) break;  // bracket exhausted at double precision
    const double r = detail::pinsker_lhs_excess(mid, beta, T) - L;
    if (std::abs(r) <= 0.5 * tol) break;
    if (r < 0.0) lo = mid; else hi = mid;
  }
  return mid;
}

/// Root W_T > 1 of the Pinsker equation.
inline double solve_WT(double beta, double L, double T) { return 1.0 + solve_WT_excess(beta, L, T); }

struct PinskerSolution {
  double beta = 2.0;
  double L = 0.0;
  double T = 0.0;
  double W_T = 0.0;
  double W_excess = 0.0;  ///< W_T - 1 at full precision
  /// Saddle weights q_k = [1 - (k / W_T)^{beta-1}]_+ for k >= 1 (q_0 stored as 0).
  std::vector<double> q;
  WeightSequence lambda_star;
  double r_T = 0.0;
  double clamp_fraction = 0.0;
  double residual = 0.0;
};

/// Assembles W_T, q, the modified weights lambda* (clamped to 1 on
/// |k| <= W_T / log T) and the minimax value r_T = (1/T) sum_{k != 0} (2 pi k)^2 q_k.
/// lambda*_1 is pinned to 1.
inline PinskerSolution pinsker_solution(double beta, double L, double T) {
  if (!(T >= 3.0)) throw ConfigError("Pinsker solution needs T >= 3 so that 1 / log T < 1");
  PinskerSolution sol;
  sol.beta = beta;
  sol.L = L;
  sol.T = T;
  sol.W_excess = solve_WT_excess(beta, L, T);
  sol.W_T = 1.0 + sol.W_excess;
  sol.residual = detail::pinsker_lhs_excess(sol.W_excess, beta, T) - L;
  sol.clamp_fraction = 1.0 / std::log(T);

  const int kmax = static_cast<int>(std::ceil(sol.W_T));
  sol.q.assign(static_cast<std::size_t>(kmax) + 1, 0.0);
  std::vector<double> lambda(static_cast<std::size_t>(kmax) + 1, 0.0);
  double acc = 0.0;
  for (int k = 1; k <= kmax; ++k) {
    const double qk = std::max(0.0, 1.0 - std::pow(k / sol.W_T, beta - 1.0));
    sol.q[k] = qk;
    lambda[k] = (k <= sol.clamp_fraction * sol.W_T) ? 1.0 : qk;
    acc += two_pi * two_pi * static_cast<double>(k) * k * qk;
  }
  lambda[1] = 1.0;
  sol.r_T = 2.0 * acc / T;
  sol.lambda_star = WeightSequence(std::move(lambda));
  return sol;
}

/// Range of |k| on which either f or w is nonzero.
inline int joint_band(const PeriodicSignal& f, const WeightSequence& w) {
  return std::max(f.max_freq(), w.cutoff());
}

inline double risk_functional(const PeriodicSignal& f, const WeightSequence& w, double T) {
  if (!(T > 0.0)) throw ConfigError("T must be positive");
  const int K = joint_band(f, w);
  double s = 0.0;
  for (int k = -K; k <= K; ++k) {
    const double lam = w(k);
    const double g = two_pi * k;
    s += g * g * ((1.0 - lam) * (1.0 - lam) * std::norm(f.coeff(k)) + lam * lam / T);
  }
  return s;
}

/// Leading term T^3 / (12 theta^4) * ||f'||^2.
inline double fisher_information(const PeriodicSignal& f, double theta, double T) {
  if (!(theta > 0.0)) throw ConfigError("theta must be positive");
  return T * T * T / (12.0 * std::pow(theta, 4)) * deriv_norm_sq(f, 1);
}

/// I(lambda) for power = 1, I(lambda^2) for power = 2.
inline double weighted_fisher(const PeriodicSignal& f, double theta, double T, const WeightSequence& w,
                              int power) {
  if (!(theta > 0.0)) throw ConfigError("theta must be positive");
  if (power != 1 && power != 2) throw ConfigError("weighted Fisher power must be 1 or 2");
  const int K = f.max_freq();
  double s = 0.0;
  for (int k = -K; k <= K; ++k) {
    const double lam = power == 1 ? w(k) : w(k) * w(k);
    const double g = two_pi * k;
    s += lam * g * g * std::norm(f.coeff(k));
  }
  return T * T * T / (12.0 * std::pow(theta, 4)) * s;
}

// ---------------------------------------------------------------------------
// Assumption validators. Growth conditions have no single-T truth value, so
// they are judged as ratio trends across an increasing grid of T.

struct WeightAssumptionRow {
  double T = 0.0;
  double w0_ratio = 0.0;        ///< N_T^4 / T
  double w1_lhs = 0.0;          ///< ||lambda'||
  double w1_rhs = 0.0;          ///< rho1 log^2 T max_k lambda_k (2 pi k)
  bool w1_pass = false;
  double w2_lhs = 0.0;          ///< sum_k lambda_k (2 pi k)^4
  double w2_rhs = 0.0;          ///< C1 T
  bool w2_pass = false;
  double t_ratio = 0.0;         ///< [sum (1-l)(2pi k)^2|c|^2]^2 log T / sum (1-l)^2 (2pi k)^2 |c|^2
  bool t_vacuous = false;       ///< both sides zero
  double bias_log = 0.0;        ///< sum (1-l)(2pi k)^2|c|^2 * log T
};

enum class Verdict { pass, fail, vacuous_pass };

inline const char* to_string(Verdict v) noexcept {
  switch (v) {
    case Verdict::pass: return "pass";
    case Verdict::fail: return "fail";
    case Verdict::vacuous_pass: return "vacuous pass";
  }
  return "?";
}

struct WeightValidationReport {
  bool structural_ok = false;
  std::string structural_message;
  double rho1 = 0.5;
  double C1 = 1e5;
  std::vector<WeightAssumptionRow> rows;
  Verdict w0 = Verdict::fail;
  Verdict w1 = Verdict::fail;
  Verdict w2 = Verdict::fail;
  Verdict technical = Verdict::fail;
  Verdict bias_decay = Verdict::fail;
};

namespace detail {

inline bool nonincreasing_with_decay(const std::vector<double>& v) {
  for (std::size_t i = 1; i < v.size(); ++i)
    if (v[i] > v[i - 1]) return false;
  return v.size() < 2 || v.back() < v.front();
}

}  // namespace detail

inline WeightValidationReport validate_weights(const WeightSequence& w, const PeriodicSignal& f,
                                               const std::vector<double>& T_grid, double rho1 = 0.5,
                                               double C1 = 1e5) {
  if (T_grid.empty()) throw ConfigError("T grid must be nonempty");
  for (std::size_t i = 1; i < T_grid.size(); ++i)
    if (!(T_grid[i] > T_grid[i - 1])) throw ConfigError("T grid must be increasing");
  for (double T : T_grid)
    if (!(T > 1.0)) throw ConfigError("T grid values must exceed 1 (log T > 0)");

  WeightValidationReport rep;
  rep.rho1 = rho1;
  rep.C1 = C1;
  if (auto err = w.structural_error()) {
    rep.structural_message = *err;
    return rep;
  }
  rep.structural_ok = true;

  const int K = joint_band(f, w);
  double grad_sq = 0.0, max_term = 0.0, fourth = 0.0, bias1 = 0.0, bias2 = 0.0;
  for (int k = -K; k <= K; ++k) {
    const double lam = w(k);
    const double g = two_pi * k;
    const double c2 = std::norm(f.coeff(k));
    grad_sq += lam * lam * g * g;
    if (k >= 1) max_term = std::max(max_term, lam * g);
    fourth += lam * g * g * g * g;
    bias1 += (1.0 - lam) * g * g * c2;
    bias2 += (1.0 - lam) * (1.0 - lam) * g * g * c2;
  }
  const double N = w.cutoff();

  std::vector<double> w0r, tr, bl;
  bool all_w1 = true, all_w2 = true, all_vacuous = true;
  for (double T : T_grid) {
    const double lg = std::log(T);
    WeightAssumptionRow row;
    row.T = T;
    row.w0_ratio = std::pow(N, 4) / T;
    row.w1_lhs = std::sqrt(grad_sq);
    row.w1_rhs = rho1 * lg * lg * max_term;
    row.w1_pass = row.w1_lhs >= row.w1_rhs;
    row.w2_lhs = fourth;
    row.w2_rhs = C1 * T;
    row.w2_pass = row.w2_lhs <= row.w2_rhs;
    row.t_vacuous = bias1 == 0.0 && bias2 == 0.0;
    row.t_ratio = row.t_vacuous ? 0.0 : bias1 * bias1 * lg / bias2;
    row.bias_log = bias1 * lg;
    all_w1 = all_w1 && row.w1_pass;
    all_w2 = all_w2 && row.w2_pass;
    all_vacuous = all_vacuous && row.t_vacuous;
    w0r.push_back(row.w0_ratio);
    tr.push_back(row.t_ratio);
    bl.push_back(row.bias_log);
    rep.rows.push_back(row);
  }
  rep.w0 = detail::nonincreasing_with_decay(w0r) ? Verdict::pass : Verdict::fail;
  rep.w1 = all_w1 ? Verdict::pass : Verdict::fail;
  rep.w2 = all_w2 ? Verdict::pass : Verdict::fail;
  if (all_vacuous) {
    rep.technical = Verdict::vacuous_pass;
    rep.bias_decay = Verdict::vacuous_pass;
  } else {
    rep.technical = detail::nonincreasing_with_decay(tr) ? Verdict::pass : Verdict::fail;
    rep.bias_decay = detail::nonincreasing_with_decay(bl) ? Verdict::pass : Verdict::fail;
  }
  return rep;
}

}  // namespace periodax

#endif  // PERIODAX_WEIGHTS_HPP
