#ifndef PERIODAX_SIGNAL_HPP
#define PERIODAX_SIGNAL_HPP

/// @file
/// 1-periodic signals held as a finite two-sided Fourier series
///   f(x) = sum_{|k| <= K} c_k exp(2 i pi k x),
/// plus the norms and class checks the period estimator relies on.

#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "periodax/error.hpp"

namespace periodax {

using complex = std::complex<double>;

inline constexpr double two_pi = 2.0 * std::numbers::pi;

/// Finite Fourier representation of a 1-periodic function.
///
/// Coefficients are stored two-sided so that a broken Hermitian symmetry can be
/// detected on evaluation; the usual constructor (from_nonnegative) builds the
/// negative half by conjugation and is Hermitian by construction.
class PeriodicSignal {
public:
  PeriodicSignal() : coeffs_(1, complex{0.0, 0.0}) {}

  /// c_0, c_1, ..., c_K; c_{-k} = conj(c_k). Im(c_0) must be zero.
  static PeriodicSignal from_nonnegative(std::span<const complex> c) {
    if (c.empty()) throw ConfigError("signal needs at least c_0");
    if (c[0].imag() != 0.0) throw ConfigError("c_0 must be real for a real-valued signal");
    const auto K = static_cast<int>(c.size()) - 1;
    PeriodicSignal f;
    f.max_freq_ = K;
    f.coeffs_.assign(2 * K + 1, complex{});
    for (int k = 0; k <= K; ++k) {
      f.coeffs_[K + k] = c[k];
      f.coeffs_[K - k] = std::conj(c[k]);
    }
    f.trim();
    return f;
  }

  /// c_{-K}, ..., c_K without any symmetry enforcement.
  static PeriodicSignal from_two_sided(std::span<const complex> c) {
    if (c.size() % 2 != 1) throw ConfigError("two-sided coefficient list must have odd length");
    PeriodicSignal f;
    f.max_freq_ = static_cast<int>(c.size() / 2);
    f.coeffs_.assign(c.begin(), c.end());
    f.trim();
    return f;
  }

  /// Sum of real cosines sqrt(2) * amp_k * cos(2 pi k x) (the orthonormal real basis).
  static PeriodicSignal cosine_sum(std::span<const std::pair<int, double>> terms) {
    int K = 0;
    for (const auto& [k, a] : terms) {
      if (k < 1) throw ConfigError("cosine_sum frequencies must be >= 1");
      K = std::max(K, k);
    }
    std::vector<complex> c(K + 1, complex{});
    for (const auto& [k, a] : terms) c[k] += complex{a / std::numbers::sqrt2, 0.0};
    return from_nonnegative(c);
  }

  int max_freq() const noexcept { return max_freq_; }

  /// c_k for any integer k (zero outside the band).
  complex coeff(int k) const noexcept {
    if (k < -max_freq_ || k > max_freq_) return {};
    return coeffs_[static_cast<std::size_t>(k + max_freq_)];
  }

  std::span<const complex> two_sided() const noexcept { return coeffs_; }

  bool is_hermitian(double tol = 0.0) const noexcept {
    for (int k = 0; k <= max_freq_; ++k)
      if (std::abs(coeff(-k) - std::conj(coeff(k))) > tol) return false;
    return true;
  }

  /// Real-basis coefficient a_j of f = sum_{j>=1} a_j eps_j(x) with
  /// eps_1 = 1, eps_{2k} = sqrt2 cos(2 pi k x), eps_{2k+1} = sqrt2 sin(2 pi k x).
  double real_basis_coeff(int j) const {
    if (j < 1) throw ConfigError("real-basis index starts at 1");
    if (j == 1) return coeff(0).real();
    const int k = j / 2;
    const complex c = coeff(k);
    return (j % 2 == 0) ? std::numbers::sqrt2 * c.real() : -std::numbers::sqrt2 * c.imag();
  }

  /// Sum of |c_k|.
  double l1_norm() const noexcept {
    double s = 0.0;
    for (const auto& c : coeffs_) s += std::abs(c);
    return s;
  }

private:
  void trim() {
    while (max_freq_ > 0 && coeff(max_freq_) == complex{} && coeff(-max_freq_) == complex{}) {
      coeffs_.erase(coeffs_.begin());
      coeffs_.pop_back();
      --max_freq_;
    }
  }

  std::vector<complex> coeffs_;
  int max_freq_ = 0;
};

/// Lower bound rho on |c_1|^2 and upper bound C0 on sum (2 pi k)^4 |c_k|^2.
struct FunctionClassParams {
  double rho = 0.0;
  double C0 = 0.0;

  FunctionClassParams(double rho_, double C0_) : rho(rho_), C0(C0_) {
    if (!(rho > 0.0) || !(rho <= C0)) throw ConfigError("function class needs 0 < rho <= C0");
  }
  /// Separation constant of the multiple-harmonic inequality, in (0, 1].
  double h() const noexcept { return rho / C0; }
};

struct SobolevBall {
  double beta = 2.0;
  double L = 1.0;

  SobolevBall(double beta_, double L_) : beta(beta_), L(L_) {
    if (!(beta >= 2.0) || !(L > 0.0)) throw ConfigError("Sobolev ball needs beta >= 2 and L > 0");
  }
};

/// Point value of f. Throws RuntimeFault when the imaginary residual exceeds
/// 1e-10 * sum |c_k|, i.e. the coefficients are not Hermitian.
inline double eval_signal(const PeriodicSignal& f, double x) {
  const int K = f.max_freq();
  complex acc{};
  for (int k = -K; k <= K; ++k) {
    const double phase = two_pi * static_cast<double>(k) * (x - std::floor(x));
    acc += f.coeff(k) * complex{std::cos(phase), std::sin(phase)};
  }
  if (std::abs(acc.imag()) > 1e-10 * f.l1_norm())
    throw RuntimeFault("signal evaluation has a non-negligible imaginary part (non-Hermitian coefficients)");
  return acc.real();
}

/// sum_k (2 pi k)^{2m} |c_k|^2.  m = 0 includes |c_0|^2.
inline double deriv_norm_sq(const PeriodicSignal& f, int m) {
  if (m < 0) throw ConfigError("derivative order must be nonnegative");
  const int K = f.max_freq();
  double s = 0.0;
  for (int k = -K; k <= K; ++k) {
    const double w = (m == 0) ? 1.0 : std::pow(two_pi * k, 2 * m);
    s += w * std::norm(f.coeff(k));
  }
  return s;
}

/// sum_k (2 pi |k|)^{2 beta} |c_k|^2; f is in W_{beta,L} iff this is <= L.
inline double sobolev_norm(const PeriodicSignal& f, double beta) {
  if (!(beta >= 0.0)) throw ConfigError("Sobolev exponent must be nonnegative");
  const int K = f.max_freq();
  double s = 0.0;
  for (int k = -K; k <= K; ++k) {
    if (k == 0) {
      if (beta == 0.0) s += std::norm(f.coeff(0));
      continue;
    }
    s += std::pow(two_pi * std::abs(k), 2.0 * beta) * std::norm(f.coeff(k));
  }
  return s;
}

inline bool in_sobolev_ball(const PeriodicSignal& f, const SobolevBall& ball) {
  return sobolev_norm(f, ball.beta) <= ball.L;
}

struct ClassCheck {
  std::string name;
  bool pass = false;
  double lhs = 0.0;
  double rhs = 0.0;
};

struct ClassReport {
  std::vector<ClassCheck> checks;

  bool all_pass() const noexcept {
    for (const auto& c : checks)
      if (!c.pass) return false;
    return true;
  }
  const ClassCheck* find(const std::string& name) const noexcept {
    for (const auto& c : checks)
      if (c.name == name) return &c;
    return nullptr;
  }
};

/// Membership in F(rho, C0) and the multiple-harmonic separation
///   sum_{q != 0} |c_{pq}|^2 <= (1 - h) sum_{q != 0} |c_q|^2   for p = 2..K_f.
/// Failures are report entries.
inline ClassReport validate_class(const PeriodicSignal& f, const FunctionClassParams& params) {
  ClassReport report;
  const double c1 = std::norm(f.coeff(1));
  report.checks.push_back({"F1", c1 >= params.rho, c1, params.rho});
  const double d2 = deriv_norm_sq(f, 2);
  report.checks.push_back({"F2", d2 <= params.C0, d2, params.C0});

  const int K = f.max_freq();
  double energy = 0.0;
  for (int k = -K; k <= K; ++k)
    if (k != 0) energy += std::norm(f.coeff(k));
  const double rhs = (1.0 - params.h()) * energy;
  for (int p = 2; p <= std::max(K, 2); ++p) {
    double lhs = 0.0;
    for (int q = -K / p; q <= K / p; ++q)
      if (q != 0) lhs += std::norm(f.coeff(p * q));
    report.checks.push_back({"separation_p" + std::to_string(p), lhs <= rhs, lhs, rhs});
  }
  return report;
}

}  // namespace periodax

#endif  // PERIODAX_SIGNAL_HPP
