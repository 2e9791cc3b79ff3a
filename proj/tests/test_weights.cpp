#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "periodax/weights.hpp"
#include "test_support.hpp"

using namespace periodax;

namespace {
constexpr double pi = std::numbers::pi;
}

TEST(Weights, ProjectionDefinition) {
  const auto w = projection_weights(4);
  EXPECT_EQ(w.values(), (std::vector<double>{0, 1, 1, 1}));
  EXPECT_EQ(w.cutoff(), 4);
  EXPECT_EQ(w(-2), 1.0);
  EXPECT_EQ(w(4), 0.0);
  EXPECT_FALSE(w.structural_error().has_value());
  const auto w2 = projection_weights(2);
  EXPECT_EQ(w2.values(), (std::vector<double>{0, 1}));
  EXPECT_THROW(projection_weights(1), ConfigError);
  for (int N = 2; N < 40; ++N) EXPECT_FALSE(projection_weights(N).structural_error().has_value());
}

TEST(Weights, StructuralErrors) {
  EXPECT_TRUE(WeightSequence({0.0, 0.9}).structural_error().has_value());
  EXPECT_TRUE(WeightSequence({0.2, 1.0}).structural_error().has_value());
  EXPECT_TRUE(WeightSequence({0.0, 1.0, 1.2}).structural_error().has_value());
  EXPECT_FALSE(WeightSequence({0.0, 1.0, 0.5, 0.0, 0.0}).structural_error().has_value());
  EXPECT_EQ(WeightSequence({0.0, 1.0, 0.5, 0.0, 0.0}).cutoff(), 3);
}

TEST(Pinsker, SolverMatchesBeta2ClosedForm) {
  const double L = std::pow(2.0 * pi, 4), T = 1e4;
  const double W = solve_WT(2.0, L, T);
  EXPECT_GT(W, 1.0);
  EXPECT_LE(std::abs(testing_support::pinsker_lhs_beta2(W, T) - L), 1e-10 * L);
  // Independent bisection on the closed form.
  double lo = 1.0, hi = 64.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (testing_support::pinsker_lhs_beta2(mid, T) < L ? lo : hi) = mid;
  }
  EXPECT_NEAR(W, 0.5 * (lo + hi), 1e-9 * W);
}

TEST(Pinsker, SolverResidualOnRandomInputs) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> ub(2.0, 4.0), ul(-2.0, 4.0), ut(1.0, 7.0);
  for (int i = 0; i < 200; ++i) {
    const double beta = ub(rng), L = std::pow(10.0, ul(rng)), T = std::pow(10.0, ut(rng));
    const double u = solve_WT_excess(beta, L, T);
    EXPECT_GT(u, 0.0);
    EXPECT_LE(std::abs(detail::pinsker_lhs_excess(u, beta, T) - L), 1e-10 * L) << beta << ' ' << L << ' ' << T;
  }
}

TEST(Pinsker, RootMonotoneInRadius) {
  const double T = 1e4, L = 1558.5;
  EXPECT_LT(solve_WT(2.0, 0.5 * L, T), solve_WT(2.0, L, T));
  EXPECT_EQ(detail::pinsker_lhs(1.0, 2.0, T), 0.0);
  EXPECT_EQ(detail::pinsker_lhs(0.5, 3.0, T), 0.0);
}

TEST(Pinsker, SolutionStructure) {
  const auto s = pinsker_solution(2.0, 4839.0, 50.0);
  EXPECT_LE(std::abs(s.residual), 1e-10 * s.L);
  EXPECT_NEAR(s.clamp_fraction, 1.0 / std::log(50.0), 1e-15);
  const auto& lam = s.lambda_star;
  EXPECT_FALSE(lam.structural_error().has_value());
  for (int k = 1; k < static_cast<int>(s.q.size()); ++k) {
    EXPECT_GE(s.q[k], 0.0);
    EXPECT_LE(s.q[k], 1.0);
    if (k >= s.W_T) {
      EXPECT_EQ(s.q[k], 0.0);
    }
    if (k <= s.clamp_fraction * s.W_T) {
      EXPECT_EQ(lam(k), 1.0);
    } else if (k > 1) {
      EXPECT_DOUBLE_EQ(lam(k), s.q[k]);
    }
  }
  // Reverse-order re-summation of (1/T) sum_{k != 0} (2 pi k)^2 q_k.
  double r = 0.0;
  for (int k = static_cast<int>(s.q.size()) - 1; k >= 1; --k) r += 2.0 * (2 * pi * k) * (2 * pi * k) * s.q[k];
  EXPECT_NEAR(s.r_T, r / s.T, 1e-12 * s.r_T);
  EXPECT_THROW(pinsker_solution(2.0, 1.0, 2.9), ConfigError);
}

TEST(Pinsker, RateIsTwoFifths) {
  std::vector<double> Ts{1e3, 1e4, 1e5, 1e6}, rs;
  for (double T : Ts) rs.push_back(pinsker_solution(2.0, std::pow(2 * pi, 4), T).r_T);
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < Ts.size(); ++i) {
    const double x = std::log(Ts[i]), y = std::log(rs[i]);
    sx += x; sy += y; sxx += x * x; sxy += x * y;
  }
  const double n = static_cast<double>(Ts.size());
  const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  EXPECT_NEAR(slope, -0.4, 0.05);
}

namespace {

WeightSequence saddle_weights(const PinskerSolution& sol) {
  auto v = sol.q;
  v[0] = 0.0;
  return WeightSequence(v);
}

// sup of R_T(f, lambda) over the ellipsoid sum (2 pi k)^4 |c_k|^2 <= L: the
// bias part is linear in |c_k|^2, so the sup puts all mass on the worst k.
double sup_risk_beta2(const WeightSequence& w, double L, double T, int kmax) {
  double worst = 0.0;
  for (int k = 1; k <= kmax; ++k) worst = std::max(worst, std::pow(1.0 - w(k), 2) / std::pow(2 * pi * k, 2));
  return L * worst + risk_functional(PeriodicSignal{}, w, T);
}

}  // namespace

TEST(Pinsker, SaddleWeightsNeverExceedMinimaxValue) {
  const double L = 1558.5, T = 1e4;
  const auto s = pinsker_solution(2.0, L, T);
  const auto q = saddle_weights(s);
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const int K = static_cast<int>(s.q.size()) + 3;
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<complex> c(static_cast<std::size_t>(K) + 1, complex{});
    double norm = 0.0;
    for (int k = 1; k <= K; ++k) {
      c[k] = {std::pow(u(rng), 4.0), 0.0};
      norm += 2.0 * std::pow(2 * pi * k, 4) * std::norm(c[k]);
    }
    for (int k = 1; k <= K; ++k) c[k] *= std::sqrt(L / norm);
    const auto f = PeriodicSignal::from_nonnegative(c);
    EXPECT_LE(risk_functional(f, q, T), s.r_T * (1.0 + 1e-10));
  }
  EXPECT_NEAR(sup_risk_beta2(q, L, T, K + 50), s.r_T, 1e-10 * s.r_T);
}

TEST(Pinsker, LeastFavourableSignalAttainsMinimaxValue) {
  const double L = 1558.5, T = 1e4;
  const auto sol = pinsker_solution(2.0, L, T);
  std::vector<complex> c(sol.q.size() + 1, complex{});
  for (int k = 1; k < static_cast<int>(c.size()); ++k) c[k] = {std::sqrt(std::max(0.0, sol.W_T / k - 1.0) / T), 0.0};
  const auto s = PeriodicSignal::from_nonnegative(c);
  EXPECT_NEAR(sobolev_norm(s, 2.0), L, 1e-9 * L);
  EXPECT_NEAR(risk_functional(s, saddle_weights(sol), T), sol.r_T, 1e-10 * sol.r_T);
}

TEST(Pinsker, ModifiedWeightsApproachMinimaxValue) {
  // The clamp on |k| <= W_T / log T costs a vanishing fraction of r_T.
  const double L = 1558.5;
  double prev = 1.0;
  for (double T : {1e4, 1e6, 1e8}) {
    const auto s = pinsker_solution(2.0, L, T);
    const double ratio = sup_risk_beta2(s.lambda_star, L, T, static_cast<int>(s.W_T) + 50) / s.r_T;
    EXPECT_GE(ratio, 1.0 - 1e-12);
    EXPECT_LT(ratio, 1.01);
    EXPECT_LT(ratio - 1.0, prev);
    prev = ratio - 1.0;
  }
}

TEST(RiskFunctional, ZeroWeightsLeaveBias) {
  const auto f = testing_support::f_cut();
  const WeightSequence zero({0.0});
  EXPECT_NEAR(risk_functional(f, zero, 50.0), deriv_norm_sq(f, 1), 1e-12);
}

TEST(RiskFunctional, BandLimitedVarianceOnly) {
  const auto f = PeriodicSignal::cosine_sum(std::vector<std::pair<int, double>>{{1, 1.0}, {2, 0.3}, {3, 0.2}});
  EXPECT_NEAR(risk_functional(f, projection_weights(4), 100.0), 8 * pi * pi / 100.0 * 14.0, 1e-12);
}

TEST(RiskFunctional, CutHarmonicHandSum) {
  const auto f = testing_support::f_cut();
  const double bias = 2.0 * std::pow(6 * pi, 2) * 0.01125;
  const double var = 2.0 / 50.0 * std::pow(2 * pi, 2) * 5.0;
  EXPECT_NEAR(risk_functional(f, projection_weights(3), 50.0), bias + var, 1e-10);
  EXPECT_NEAR(bias + var, 15.89, 0.01);
  EXPECT_NEAR(deriv_norm_sq(f, 1), 47.47, 0.01);
}

TEST(RiskFunctional, PinskerIsNotPointwiseDominant) {
  // lambda* only wins in the sup; some signal prefers a projection cutoff.
  const double T = 1e3;
  const auto s = pinsker_solution(2.0, 1558.5, T);
  const auto f1 = testing_support::f1();
  bool found = false;
  for (int N = 2; N < 20 && !found; ++N)
    found = risk_functional(f1, s.lambda_star, T) > risk_functional(f1, projection_weights(N), T) + 1e-12;
  EXPECT_TRUE(found);
  EXPECT_GE(risk_functional(f1, s.lambda_star, T), 0.0);
}

TEST(Fisher, HandSubstitution) {
  const auto f1 = testing_support::f1();
  EXPECT_NEAR(fisher_information(f1, 1.0, 100.0), 1e6 / 12.0 * 4 * pi * pi, 1e-6);
  EXPECT_NEAR(fisher_information(f1, 1.0, 100.0), 3.28987e6, 10.0);
  EXPECT_NEAR(fisher_information(f1, 1.7, 100.0), fisher_information(f1, 1.0, 100.0) / std::pow(1.7, 4), 1e-6);
  EXPECT_NEAR(fisher_information(f1, 1.0, 200.0), 8.0 * fisher_information(f1, 1.0, 100.0), 1e-4);
  EXPECT_THROW(fisher_information(f1, 0.0, 100.0), ConfigError);
  const auto f = testing_support::f_cut();
  EXPECT_DOUBLE_EQ(fisher_information(f, 1.3, 77.0),
                   77.0 * 77.0 * 77.0 / (12.0 * std::pow(1.3, 4)) * deriv_norm_sq(f, 1));
}

TEST(Fisher, WeightedOrdering) {
  const auto f = testing_support::f_cut();
  const double IT = fisher_information(f, 1.0, 50.0);
  EXPECT_DOUBLE_EQ(weighted_fisher(f, 1.0, 50.0, projection_weights(4), 1), IT);
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 100; ++i) {
    const WeightSequence w({0.0, 1.0, u(rng), u(rng), u(rng)});
    const double a = weighted_fisher(f, 1.0, 50.0, w, 1), b = weighted_fisher(f, 1.0, 50.0, w, 2);
    EXPECT_LE(b, a * (1 + 1e-15));
    EXPECT_LE(a, IT * (1 + 1e-15));
    EXPECT_DOUBLE_EQ(weighted_fisher(testing_support::f1(), 1.0, 50.0, w, 1),
                     fisher_information(testing_support::f1(), 1.0, 50.0));
  }
  EXPECT_THROW(weighted_fisher(f, -1.0, 50.0, projection_weights(2), 1), ConfigError);
}

TEST(ValidateWeights, StructuralFailureFirst) {
  const auto rep = validate_weights(WeightSequence({0.0, 0.5}), testing_support::f1(), {100.0, 1000.0});
  EXPECT_FALSE(rep.structural_ok);
  EXPECT_TRUE(rep.rows.empty());
}

TEST(ValidateWeights, ProjectionPassesW1) {
  const auto rep = validate_weights(projection_weights(256), testing_support::f1(), {std::exp(4.0)}, 0.5);
  ASSERT_TRUE(rep.structural_ok);
  // ||lambda'||^2 = 8 pi^2 sum_{k<256} k^2; max term 2 pi 255.
  const double lhs = std::sqrt(8 * pi * pi * (255.0 * 256.0 * 511.0 / 6.0));
  EXPECT_NEAR(rep.rows[0].w1_lhs, lhs, 1e-9 * lhs);
  EXPECT_NEAR(rep.rows[0].w1_rhs, 0.5 * 16.0 * 2 * pi * 255.0, 1e-9);
  EXPECT_TRUE(rep.rows[0].w1_pass);
  EXPECT_EQ(rep.w1, Verdict::pass);
}

TEST(ValidateWeights, ZeroBiasIsVacuous) {
  const auto rep = validate_weights(projection_weights(4), testing_support::f_cut(), {1e2, 1e3, 1e4});
  EXPECT_EQ(rep.technical, Verdict::vacuous_pass);
  EXPECT_EQ(rep.bias_decay, Verdict::vacuous_pass);
  EXPECT_EQ(rep.w0, Verdict::pass);
}

TEST(ValidateWeights, FixedCutWeightsFailTechnicalCondition) {
  // A fixed cut leaves constant bias: the (T) ratio grows like log T.
  const auto rep = validate_weights(projection_weights(3), testing_support::f_cut(), {1e2, 1e3, 1e4});
  EXPECT_EQ(rep.technical, Verdict::fail);
  EXPECT_EQ(rep.bias_decay, Verdict::fail);
  EXPECT_GT(rep.rows[0].t_ratio, 0.0);
  EXPECT_THROW(validate_weights(projection_weights(3), testing_support::f1(), {}), ConfigError);
  EXPECT_THROW(validate_weights(projection_weights(3), testing_support::f1(), {10.0, 5.0}), ConfigError);
}
