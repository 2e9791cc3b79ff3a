#ifndef PERIODAX_OBSERVATION_HPP
#define PERIODAX_OBSERVATION_HPP

/// @file
/// Discretized observation of dx(t) = f(t/theta) dt + dW(t) on [-T/2, T/2]
/// and the exponential sums S_k(tau) = sum_i exp(2 i pi k t_i / tau) y_i
/// every criterion evaluation is built from.

#include <cmath>
#include <complex>
#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "periodax/error.hpp"
#include "periodax/signal.hpp"

namespace periodax {

struct SimulationConfig {
  PeriodicSignal f;
  double theta = 1.0;
  double T = 1.0;
  /// Highest harmonic index any consumer of the record will probe.
  int K_max = 1;
  /// Smallest period any consumer will probe (the estimator's theta_lo).
  double alpha_lo = 1.0;
  int oversample = 16;
  bool noise_on = true;
  bool keep_noise = false;
  std::uint64_t seed = 0;
  /// Explicit grid step; when unset dt = alpha_lo / (oversample * K_max).
  std::optional<double> dt_override;

  double dt() const {
    if (dt_override) return *dt_override;
    return alpha_lo / (static_cast<double>(oversample) * K_max);
  }

  void validate() const {
    if (!(theta > 0.0)) throw ConfigError("theta must be positive");
    if (!(T > 0.0)) throw ConfigError("T must be positive");
    if (K_max < 1) throw ConfigError("K_max must be >= 1");
    if (!(alpha_lo > 0.0)) throw ConfigError("alpha_lo must be positive");
    if (oversample < 1) throw ConfigError("oversample must be >= 1");
    if (!(dt() > 0.0)) throw ConfigError("dt must be positive");
    if (dt() >= theta / (8.0 * K_max))
      throw ConfigError("grid step dt >= theta / (8 K_max): aliasing risk");
  }
};

enum class SumSource { data, noise, deterministic };

struct ObservationRecord {
  double T = 0.0;
  double dt = 0.0;
  std::vector<double> midpoints;
  std::vector<double> dx;
  /// Noise increments, kept only on request.
  std::optional<std::vector<double>> dw;
  std::optional<double> theta_true;
  std::uint64_t seed = 0;

  std::size_t size() const noexcept { return dx.size(); }

  /// Largest harmonic index K with dt * K / tau <= 1/8.
  int capacity(double tau) const noexcept {
    return static_cast<int>(std::floor(tau / (8.0 * dt) * (1.0 + 1e-12)));
  }
};

/// Midpoint-drift Euler scheme; the noise increments are exact N(0, dt) draws.
/// The step is adjusted to T / round(T / dt) so that the grid tiles [-T/2, T/2].
inline ObservationRecord simulate_observation(const SimulationConfig& cfg) {
  cfg.validate();
  const auto n = static_cast<std::size_t>(std::llround(cfg.T / cfg.dt()));
  if (n == 0) throw ConfigError("T / dt rounds to zero samples");

  ObservationRecord rec;
  rec.T = cfg.T;
  rec.dt = cfg.T / static_cast<double>(n);
  rec.theta_true = cfg.theta;
  rec.seed = cfg.seed;
  rec.midpoints.resize(n);
  rec.dx.resize(n);
  if (cfg.keep_noise) rec.dw.emplace(n, 0.0);

  std::mt19937_64 rng(cfg.seed);
  std::normal_distribution<double> gauss(0.0, std::sqrt(rec.dt));
  for (std::size_t i = 0; i < n; ++i) {
    const double t = -0.5 * cfg.T + (static_cast<double>(i) + 0.5) * rec.dt;
    rec.midpoints[i] = t;
    const double drift = eval_signal(cfg.f, t / cfg.theta) * rec.dt;
    const double w = cfg.noise_on ? gauss(rng) : 0.0;
    rec.dx[i] = drift + w;
    if (rec.dw) (*rec.dw)[i] = w;
  }
  return rec;
}

/// S_1..S_K at period tau (index 0 holds S_1). Power recurrence per sample,
/// index-ascending accumulation.
inline std::vector<complex> exponential_sums(const ObservationRecord& obs, double tau, int K,
                                             SumSource source = SumSource::data) {
  if (!(tau > 0.0)) throw ConfigError("tau must be positive");
  if (K < 1) throw ConfigError("K must be >= 1");
  if (K > obs.capacity(tau))
    throw RuntimeFault("harmonic count exceeds record capacity at this tau (dt * K / tau > 1/8)");
  if (source != SumSource::data && !obs.dw)
    throw RuntimeFault("noise increments were not retained in this record");

  std::vector<complex> S(static_cast<std::size_t>(K), complex{});
  const double omega = two_pi / tau;
  const std::size_t n = obs.size();
  for (std::size_t i = 0; i < n; ++i) {
    double y = 0.0;
    switch (source) {
      case SumSource::data: y = obs.dx[i]; break;
      case SumSource::noise: y = (*obs.dw)[i]; break;
      case SumSource::deterministic: y = obs.dx[i] - (*obs.dw)[i]; break;
    }
    const double phase = omega * obs.midpoints[i];
    const complex z{std::cos(phase), std::sin(phase)};
    complex zk = z;
    for (int k = 0; k < K; ++k) {
      S[k] += zk * y;
      zk *= z;
    }
  }
  return S;
}

}  // namespace periodax

#endif  // PERIODAX_OBSERVATION_HPP
