#include <gtest/gtest.h>

#include <sstream>

#include "periodax/io.hpp"
#include "test_support.hpp"

using namespace periodax;

TEST(IoSignal, RoundTrip) {
  const auto f = testing_support::f_cut();
  const auto g = signal_from_json(signal_to_json(f));
  for (int k = -3; k <= 3; ++k) EXPECT_EQ(f.coeff(k), g.coeff(k));
  EXPECT_EQ(g.max_freq(), 3);
}

TEST(IoSignal, Rejects) {
  EXPECT_THROW(signal_from_json(json::object()), ConfigError);
  EXPECT_THROW(signal_from_json(json::parse(R"({"coeffs":[[1,0.5]]})")), ConfigError);
  EXPECT_THROW(signal_from_json(json::parse(R"({"coeffs":[[-1,0.5,0]]})")), ConfigError);
  EXPECT_THROW(signal_from_json(json::parse(R"({"coeffs":[[0,0.5,0.1]]})")), ConfigError);
}

TEST(IoWeights, AllForms) {
  EXPECT_EQ(weights_from_json(json::parse(R"({"projection":4})"), 50.0).weights.values(),
            projection_weights(4).values());
  const auto l = weights_from_json(json::parse(R"({"lambda":[0,1,0.5]})"), 50.0);
  EXPECT_EQ(l.weights.cutoff(), 3);
  EXPECT_FALSE(l.pinsker.has_value());
  const auto p = weights_from_json(json::parse(R"({"pinsker":{"beta":2,"L":1558.5}})"), 1e4);
  ASSERT_TRUE(p.pinsker.has_value());
  EXPECT_EQ(p.weights.values(), p.pinsker->lambda_star.values());
  EXPECT_THROW(weights_from_json(json::parse(R"({"other":1})"), 50.0), ConfigError);
  EXPECT_THROW(weights_from_json(json::parse(R"({"projection":1})"), 50.0), ConfigError);

  const auto j = weights_to_json(projection_weights(3));
  EXPECT_EQ(j["N_T"], 3);
  EXPECT_EQ(j["lambda"].size(), 3u);
  const auto pj = pinsker_to_json(*p.pinsker);
  for (const char* key : {"beta", "L", "T", "W_T", "r_T"}) EXPECT_TRUE(pj.contains(key)) << key;
}

TEST(IoConfig, Experiment) {
  const auto j = json::parse(R"({
    "signal": {"coeffs": [[1, 0.7071067811865476, 0]]},
    "theta": 1.0, "T": 50,
    "weights": {"projection": 4},
    "estimator": {"theta_lo": 0.9, "theta_hi": 1.1, "threshold_override": 0.9},
    "n_reps": 7, "master_seed": 11, "estimator_kind": "one_step_oracle"
  })");
  const auto cfg = experiment_from_json(j);
  EXPECT_EQ(cfg.n_reps, 7);
  EXPECT_EQ(cfg.master_seed, 11u);
  EXPECT_EQ(cfg.kind, EstimatorKind::one_step_oracle);
  EXPECT_EQ(*cfg.est.threshold_override, 0.9);
  EXPECT_TRUE(cfg.sim.noise_on);
  auto bad = j;
  bad["estimator_kind"] = "median";
  EXPECT_THROW(experiment_from_json(bad), ConfigError);
  bad = j;
  bad["estimator"]["theta_hi"] = 0.8;
  EXPECT_THROW(experiment_from_json(bad), ConfigError);
  bad = j;
  bad.erase("weights");
  EXPECT_THROW(experiment_from_json(bad), json::exception);
}

TEST(IoObservation, CsvRoundTrip) {
  SimulationConfig c;
  c.f = testing_support::f1();
  c.T = 5.0;
  c.K_max = 2;
  c.alpha_lo = 0.9;
  c.keep_noise = true;
  c.seed = 99;
  const auto rec = simulate_observation(c);
  std::stringstream ss;
  write_observation_csv(ss, rec);
  const auto back = read_observation_csv(ss);
  EXPECT_EQ(back.T, rec.T);
  EXPECT_EQ(back.dt, rec.dt);
  EXPECT_EQ(back.seed, rec.seed);
  EXPECT_EQ(back.theta_true, rec.theta_true);
  EXPECT_EQ(back.dx, rec.dx);
  EXPECT_EQ(back.midpoints, rec.midpoints);
  ASSERT_TRUE(back.dw.has_value());
  EXPECT_EQ(*back.dw, *rec.dw);

  std::stringstream broken("# T=1\nt,x\n");
  EXPECT_THROW(read_observation_csv(broken), ConfigError);
}

TEST(IoResults, CsvLayouts) {
  RiskReport r;
  r.n_reps = 3;
  std::stringstream ss;
  write_risk_csv(ss, r);
  std::string header;
  std::getline(ss, header);
  EXPECT_EQ(header,
            "normalized_risk,std_error,normalized_risk_all,predicted,second_order_predicted,"
            "second_order_measured,R_T,r_T,fisher,deriv_norm_sq,n_reps,n_effective,outlier_count");
  std::string row;
  std::getline(ss, row);
  EXPECT_NE(row.find(",nan,"), std::string::npos);

  CriterionProfile p;
  p.taus = {0.5, 1.0};
  p.values = {0.25, 2.0};
  std::stringstream ps;
  write_profile_csv(ps, p, "Gamma");
  EXPECT_EQ(ps.str(), "tau,Gamma\n0.5,0.25\n1,2\n");
  EXPECT_EQ(fmt_double(0.1), "0.10000000000000001");
}
