#ifndef PERIODAX_CRITERION_HPP
#define PERIODAX_CRITERION_HPP

/// @file
/// The weighted criterion
///   L(tau) = sum_{k>=1} (lambda_k / T) |int exp(2 i k pi t / tau) dx(t)|^2,
/// its exact deterministic part Gamma(tau) for band-limited f, the
/// Gamma / X / Psi split of 2L, and finite-difference derivatives.

#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "periodax/error.hpp"
#include "periodax/observation.hpp"
#include "periodax/signal.hpp"
#include "periodax/weights.hpp"

namespace periodax {

namespace detail {

// Taylor coefficients of sin(u)/u in u^2: (-1)^n / (2n+1)!.
inline constexpr int sinc_terms = 14;

inline double sinc_series(double u, int order) {
  // d^order/du^order of sum_n a_n u^{2n}
  double s = 0.0;
  double fact = 1.0;  // (2n+1)!
  for (int n = 0; n < sinc_terms; ++n) {
    if (n > 0) fact *= (2.0 * n) * (2.0 * n + 1.0);
    const int p = 2 * n;
    if (p < order) continue;
    double falling = 1.0;
    for (int j = 0; j < order; ++j) falling *= static_cast<double>(p - j);
    const double a = ((n % 2 == 0) ? 1.0 : -1.0) / fact;
    s += a * falling * std::pow(u, p - order);
  }
  return s;
}

}  // namespace detail

/// Derivative of order 0..3 of phi_hat(x) = sin(pi x) / (pi x), the Fourier
/// transform of the indicator of [-1/2, 1/2]. The series branch covers
/// |x| < 1/4 where the closed forms cancel catastrophically.
inline double phi_hat(double x, int order = 0) {
  if (order < 0 || order > 3) throw ConfigError("phi_hat order must be in 0..3");
  constexpr double pi = std::numbers::pi;
  const double u = pi * x;
  const double scale = std::pow(pi, order);
  if (std::abs(x) < 0.25) return scale * detail::sinc_series(u, order);
  const double s = std::sin(u), c = std::cos(u);
  switch (order) {
    case 0: return s / u;
    case 1: return scale * (u * c - s) / (u * u);
    case 2: return scale * ((2.0 - u * u) * s - 2.0 * u * c) / (u * u * u);
    default: return scale * ((3.0 * u * u - 6.0) * s + (6.0 * u - u * u * u) * c) / (u * u * u * u);
  }
}

/// Lobe bookkeeping for one (k, l) pair at a trial period tau.
struct GammaEvalContext {
  double a_kl = 0.0;   ///< (T / theta)(l - k theta / tau)
  double b_kl = 0.0;   ///< (T / theta)(l - k)
  long nearest_l = 0;  ///< integer closest to k theta / tau
  double dist = 0.0;   ///< distance of k theta / tau to the integers
};

inline GammaEvalContext gamma_context(int k, int l, double theta, double tau, double T) {
  GammaEvalContext ctx;
  const double r = k * theta / tau;
  ctx.a_kl = (T / theta) * (l - r);
  ctx.b_kl = (T / theta) * static_cast<double>(l - k);
  ctx.nearest_l = std::lround(r);
  ctx.dist = std::abs(r - static_cast<double>(ctx.nearest_l));
  return ctx;
}

/// Exact Gamma(tau) = sum_{k in Z} lambda_k T |sum_l c_l phi_hat(a_{k,l})|^2.
/// The inner sum is finite because f is band-limited.
inline double gamma_oracle(const PeriodicSignal& f, double theta, const WeightSequence& w, double T,
                           double tau) {
  if (!(tau > 0.0) || !(theta > 0.0)) throw ConfigError("tau and theta must be positive");
  const int N = w.max_weighted_freq();
  const int K = f.max_freq();
  double total = 0.0;
  for (int k = -N; k <= N; ++k) {
    const double lam = w(k);
    if (lam == 0.0) continue;
    complex g{};
    for (int l = -K; l <= K; ++l) {
      const complex c = f.coeff(l);
      if (c == complex{}) continue;
      g += c * phi_hat((T / theta) * (l - k * theta / tau));
    }
    total += lam * T * std::norm(g);
  }
  return total;
}

/// Weighted criterion L(tau) from the data increments.
inline double criterion_L(const ObservationRecord& obs, const WeightSequence& w, double tau) {
  const int K = w.max_weighted_freq();
  if (K == 0) return 0.0;
  const auto S = exponential_sums(obs, tau, K, SumSource::data);
  double s = 0.0;
  for (int k = 1; k <= K; ++k) s += w(k) / obs.T * std::norm(S[k - 1]);
  return s;
}

struct GammaDecomposition {
  double gamma = 0.0;  ///< deterministic part
  double cross = 0.0;  ///< signal x noise cross term
  double psi = 0.0;    ///< pure-noise quadratic form
};

/// Splits 2 L(tau) into Gamma + X + Psi on a record that retained its noise.
/// A simulation diagnostic: (f, theta) identify the generating model.
inline GammaDecomposition decompose(const ObservationRecord& obs, const PeriodicSignal& f, double theta,
                                    const WeightSequence& w, double tau) {
  if (!obs.dw) throw RuntimeFault("decompose needs a record with retained noise increments");
  if (obs.theta_true && std::abs(*obs.theta_true - theta) > 1e-12 * theta)
    throw ConfigError("decompose: theta does not match the record's generating period");
  (void)f;
  GammaDecomposition out;
  const int K = w.max_weighted_freq();
  if (K == 0) return out;
  const auto D = exponential_sums(obs, tau, K, SumSource::deterministic);
  const auto Nz = exponential_sums(obs, tau, K, SumSource::noise);
  for (int k = 1; k <= K; ++k) {
    const double a = w(k) / obs.T;
    const complex d = D[k - 1], n = Nz[k - 1];
    out.gamma += 2.0 * a * std::norm(d);
    out.cross += 4.0 * a * (d * std::conj(n)).real();
    out.psi += 2.0 * a * std::norm(n);
  }
  return out;
}

/// Finite-difference step tau^2 / (100 T K_eff), a hundredth of the narrowest lobe.
inline double derivative_step(double tau, double T, const WeightSequence& w) {
  const int K = std::max(w.max_weighted_freq(), 1);
  return tau * tau / (100.0 * T * K);
}

struct CurvatureCheck {
  double gamma_first = 0.0;
  double gamma_second = 0.0;
  double minus_two_I_lambda = 0.0;
  double rel_err = 0.0;
  double step = 0.0;
};

/// Compares the numerical curvature of Gamma at theta with -2 I(lambda).
/// Five-point central stencils keep truncation error far below the
/// asymptotic remainder being measured.
inline CurvatureCheck gamma_curvature_check(const PeriodicSignal& f, double theta, const WeightSequence& w,
                                            double T) {
  CurvatureCheck out;
  const double h = theta * theta / (100.0 * T * std::max(w.max_weighted_freq(), 1));
  out.step = h;
  auto G = [&](double tau) { return gamma_oracle(f, theta, w, T, tau); };
  const double gm2 = G(theta - 2 * h), gm1 = G(theta - h), g0 = G(theta), gp1 = G(theta + h),
               gp2 = G(theta + 2 * h);
  out.gamma_first = (gm2 - 8.0 * gm1 + 8.0 * gp1 - gp2) / (12.0 * h);
  out.gamma_second = (-gm2 + 16.0 * gm1 - 30.0 * g0 + 16.0 * gp1 - gp2) / (12.0 * h * h);
  out.minus_two_I_lambda = -2.0 * weighted_fisher(f, theta, T, w, 1);
  out.rel_err = std::abs(out.gamma_second - out.minus_two_I_lambda) / std::abs(out.minus_two_I_lambda);
  return out;
}

/// Closed interval of admissible tau values for a derivative stencil.
struct ProbeInterval {
  double lo = 0.0;
  double hi = std::numeric_limits<double>::infinity();
};

/// Central finite difference of L of order 1 or 2 with step h (default
/// derivative_step). Throws when the stencil leaves the probe interval or the
/// record's capacity.
inline double criterion_derivs(const ObservationRecord& obs, const WeightSequence& w, double tau, int order,
                               ProbeInterval range = {}, double h = 0.0) {
  if (order != 1 && order != 2) throw ConfigError("criterion derivative order must be 1 or 2");
  if (h <= 0.0) h = derivative_step(tau, obs.T, w);
  if (tau - 2.0 * h < range.lo || tau + 2.0 * h > range.hi)
    throw RuntimeFault("tau too close to the edge of the probed interval for the derivative stencil");
  if (w.max_weighted_freq() > obs.capacity(tau - h))
    throw RuntimeFault("derivative stencil exceeds record capacity");
  const double lp = criterion_L(obs, w, tau + h);
  const double lm = criterion_L(obs, w, tau - h);
  if (order == 1) return (lp - lm) / (2.0 * h);
  const double l0 = criterion_L(obs, w, tau);
  return (lp - 2.0 * l0 + lm) / (h * h);
}

/// L sampled on a grid of periods.
struct CriterionProfile {
  std::vector<double> taus;
  std::vector<double> values;
  double sup_value = 0.0;
  double argmax_tau = 0.0;
  double step = 0.0;

  void finalize() {
    if (values.empty()) return;
    std::size_t best = 0;
    for (std::size_t i = 1; i < values.size(); ++i)
      if (values[i] > values[best]) best = i;
    sup_value = values[best];
    argmax_tau = taus[best];
  }
};

}  // namespace periodax

#endif  // PERIODAX_CRITERION_HPP
