#ifndef PERIODAX_IO_HPP
#define PERIODAX_IO_HPP

/// @file
/// JSON and CSV forms of the library types, plus the JSON run configurations
/// read by the command-line tool.
///
/// CSV layouts (column order is fixed):
///   observation record   t_mid,dx[,dw]        preceded by "# T=", "# dt=", "# seed=" lines
///   criterion profile    tau,L
///   gamma scan           tau,Gamma
///   risk report          normalized_risk,std_error,normalized_risk_all,predicted,
///                        second_order_predicted,second_order_measured,R_T,r_T,fisher,
///                        deriv_norm_sq,n_reps,n_effective,outlier_count
///   rate curve           T,r_T,R_T,second_order_predicted,second_order_measured,std_error
/// Missing optional values are written as "nan".

#include <cstdio>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "periodax/error.hpp"
#include "periodax/estimator.hpp"
#include "periodax/risk_lab.hpp"

namespace periodax {

using json = nlohmann::json;

inline std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::string fmt_opt(const std::optional<double>& v) { return v ? fmt_double(*v) : std::string("nan"); }

// ---------------------------------------------------------------- signal

inline json signal_to_json(const PeriodicSignal& f) {
  json coeffs = json::array();
  for (int k = 0; k <= f.max_freq(); ++k) {
    const complex c = f.coeff(k);
    if (c == complex{} && k != 0) continue;
    coeffs.push_back(json::array({k, c.real(), c.imag()}));
  }
  return json{{"coeffs", coeffs}};
}

inline PeriodicSignal signal_from_json(const json& j) {
  if (!j.is_object() || !j.contains("coeffs") || !j["coeffs"].is_array())
    throw ConfigError("signal JSON needs a \"coeffs\" array of [k, re, im]");
  int K = 0;
  for (const auto& e : j["coeffs"]) {
    if (!e.is_array() || e.size() != 3) throw ConfigError("signal coefficient entries must be [k, re, im]");
    const int k = e[0].get<int>();
    if (k < 0) throw ConfigError("signal JSON stores only k >= 0");
    K = std::max(K, k);
  }
  std::vector<complex> c(static_cast<std::size_t>(K) + 1, complex{});
  for (const auto& e : j["coeffs"]) c[e[0].get<int>()] += complex{e[1].get<double>(), e[2].get<double>()};
  return PeriodicSignal::from_nonnegative(c);
}

// ---------------------------------------------------------------- weights

inline json weights_to_json(const WeightSequence& w) {
  return json{{"lambda", w.values()}, {"N_T", w.cutoff()}};
}

inline json pinsker_to_json(const PinskerSolution& s) {
  return json{{"beta", s.beta},
              {"L", s.L},
              {"T", s.T},
              {"W_T", s.W_T},
              {"r_T", s.r_T},
              {"residual", s.residual},
              {"gamma_T", s.clamp_fraction},
              {"q", s.q},
              {"lambda_star", s.lambda_star.values()}};
}

struct ResolvedWeights {
  WeightSequence weights;
  std::optional<PinskerSolution> pinsker;
};

/// {"projection": N} | {"lambda": [...]} | {"pinsker": {"beta": b, "L": l}}.
inline ResolvedWeights weights_from_json(const json& j, double T) {
  if (!j.is_object()) throw ConfigError("weights must be an object");
  if (j.contains("projection")) return {projection_weights(j["projection"].get<int>()), std::nullopt};
  if (j.contains("lambda")) {
    WeightSequence w(j["lambda"].get<std::vector<double>>());
    return {w, std::nullopt};
  }
  if (j.contains("pinsker")) {
    const auto& p = j["pinsker"];
    auto sol = pinsker_solution(p.at("beta").get<double>(), p.at("L").get<double>(), T);
    return {sol.lambda_star, sol};
  }
  throw ConfigError("weights need one of \"projection\", \"lambda\", \"pinsker\"");
}

inline json validation_to_json(const WeightValidationReport& r) {
  json rows = json::array();
  for (const auto& row : r.rows) {
    rows.push_back({{"T", row.T},
                    {"W0_ratio", row.w0_ratio},
                    {"W1_lhs", row.w1_lhs},
                    {"W1_rhs", row.w1_rhs},
                    {"W1_pass", row.w1_pass},
                    {"W2_lhs", row.w2_lhs},
                    {"W2_rhs", row.w2_rhs},
                    {"W2_pass", row.w2_pass},
                    {"T_ratio", row.t_ratio},
                    {"T_vacuous", row.t_vacuous},
                    {"bias_log", row.bias_log}});
  }
  return json{{"structural_ok", r.structural_ok},
              {"structural_message", r.structural_message},
              {"rho1", r.rho1},
              {"C1", r.C1},
              {"W0", to_string(r.w0)},
              {"W1", to_string(r.w1)},
              {"W2", to_string(r.w2)},
              {"T", to_string(r.technical)},
              {"bias_decay", to_string(r.bias_decay)},
              {"rows", rows}};
}

// ---------------------------------------------------------------- configs

inline EstimatorConfig estimator_from_json(const json& j) {
  EstimatorConfig c;
  c.theta_lo = j.at("theta_lo").get<double>();
  c.theta_hi = j.at("theta_hi").get<double>();
  c.grid_step_divisor = j.value("grid_step_divisor", c.grid_step_divisor);
  c.threshold_exponent = j.value("threshold_exponent", c.threshold_exponent);
  if (j.contains("threshold_override") && !j["threshold_override"].is_null())
    c.threshold_override = j["threshold_override"].get<double>();
  c.refine_rel_tol = j.value("refine_rel_tol", c.refine_rel_tol);
  c.max_grid_points = j.value("max_grid_points", c.max_grid_points);
  c.validate();
  return c;
}

/// Shared model block: signal, theta, T, oversample, noise, seed.
inline SimulationConfig simulation_from_json(const json& j) {
  SimulationConfig s;
  s.f = signal_from_json(j.at("signal"));
  s.theta = j.at("theta").get<double>();
  s.T = j.at("T").get<double>();
  s.oversample = j.value("oversample", 16);
  s.noise_on = j.value("noise", true);
  s.keep_noise = j.value("keep_noise", false);
  s.seed = j.value("seed", std::uint64_t{0});
  s.K_max = j.value("K_max", 1);
  s.alpha_lo = j.value("alpha_lo", s.theta);
  if (j.contains("dt")) s.dt_override = j["dt"].get<double>();
  return s;
}

inline ExperimentConfig experiment_from_json(const json& j) {
  ExperimentConfig cfg;
  cfg.sim = simulation_from_json(j);
  auto rw = weights_from_json(j.at("weights"), cfg.sim.T);
  cfg.weights = rw.weights;
  cfg.pinsker = rw.pinsker;
  cfg.est = estimator_from_json(j.at("estimator"));
  cfg.n_reps = j.value("n_reps", 100);
  cfg.master_seed = j.value("master_seed", std::uint64_t{1});
  const auto kind = j.value("estimator_kind", std::string("theta_star"));
  if (kind == "theta_star") cfg.kind = EstimatorKind::theta_star;
  else if (kind == "one_step_oracle") cfg.kind = EstimatorKind::one_step_oracle;
  else throw ConfigError("estimator_kind must be theta_star or one_step_oracle");
  cfg.validate();
  return cfg;
}

// ---------------------------------------------------------------- results

inline json trace_to_json(const EstimatorTrace& t) {
  return json{{"theta_star", t.theta_star},
              {"L_star", t.L_star},
              {"e_T", t.e_T},
              {"threshold_factor", t.threshold_factor},
              {"threshold_value", t.threshold_value},
              {"E_T_members", t.E_T_members},
              {"search_ball", {t.ball_lo, t.ball_hi}},
              {"grid_best_tau", t.grid_best_tau},
              {"refine_iters", t.refine_iters},
              {"grid_step", t.profile.step},
              {"grid_points", t.profile.taus.size()},
              {"sup_value", t.profile.sup_value},
              {"argmax_tau", t.profile.argmax_tau},
              {"advisory", {{"theta_lo_times_T_inverse", t.lower_growth_ratio},
                            {"theta_hi_over_log_T", t.upper_growth_ratio}}}};
}

inline json risk_to_json(const RiskReport& r) {
  json j{{"normalized_risk", r.normalized_risk},
         {"std_error", r.std_error},
         {"normalized_risk_all", r.normalized_risk_all},
         {"predicted", r.predicted},
         {"first_order", r.first_order},
         {"second_order_predicted", r.second_order_predicted},
         {"second_order_measured", r.second_order_measured},
         {"R_T", r.R_T},
         {"fisher", r.fisher},
         {"deriv_norm_sq", r.deriv_norm_sq},
         {"n_reps", r.n_reps},
         {"n_effective", r.n_effective},
         {"outlier_count", r.outlier_count},
         {"mean_scaled_error", r.mean_scaled_error}};
  j["r_T"] = r.r_T ? json(*r.r_T) : json(nullptr);
  return j;
}

inline json paired_to_json(const PairedReport& p) {
  return json{{"n_reps", p.n_reps},
              {"n_effective", p.n_effective},
              {"mean_sq_diff", p.mean_sq_diff},
              {"std_error", p.std_error},
              {"second_order_predicted", p.second_order_predicted},
              {"ratio_to_second_order", p.ratio_to_second_order},
              {"correlation", p.correlation},
              {"risk_theta_star", p.risk_theta_star},
              {"risk_one_step", p.risk_one_step}};
}

inline void write_risk_csv(std::ostream& os, const RiskReport& r) {
  os << "normalized_risk,std_error,normalized_risk_all,predicted,second_order_predicted,"
        "second_order_measured,R_T,r_T,fisher,deriv_norm_sq,n_reps,n_effective,outlier_count\n";
  os << fmt_double(r.normalized_risk) << ',' << fmt_double(r.std_error) << ',' << fmt_double(r.normalized_risk_all)
     << ',' << fmt_double(r.predicted) << ',' << fmt_double(r.second_order_predicted) << ','
     << fmt_double(r.second_order_measured) << ',' << fmt_double(r.R_T) << ',' << fmt_opt(r.r_T) << ','
     << fmt_double(r.fisher) << ',' << fmt_double(r.deriv_norm_sq) << ',' << r.n_reps << ',' << r.n_effective
     << ',' << r.outlier_count << '\n';
}

inline void write_curve_csv(std::ostream& os, const CurveTable& t) {
  os << "# fitted_slope=" << fmt_double(t.fitted_slope) << '\n';
  os << "T,r_T,R_T,second_order_predicted,second_order_measured,std_error\n";
  for (const auto& r : t.rows)
    os << fmt_double(r.T) << ',' << fmt_opt(r.r_T) << ',' << fmt_double(r.R_T) << ','
       << fmt_double(r.second_order_predicted) << ',' << fmt_opt(r.second_order_measured) << ','
       << fmt_opt(r.std_error) << '\n';
}

inline void write_profile_csv(std::ostream& os, const CriterionProfile& p, const char* value_name = "L") {
  os << "tau," << value_name << '\n';
  for (std::size_t i = 0; i < p.taus.size(); ++i) os << fmt_double(p.taus[i]) << ',' << fmt_double(p.values[i]) << '\n';
}

// ---------------------------------------------------------------- observation records

inline void write_observation_csv(std::ostream& os, const ObservationRecord& rec) {
  os << "# T=" << fmt_double(rec.T) << '\n';
  os << "# dt=" << fmt_double(rec.dt) << '\n';
  os << "# seed=" << rec.seed << '\n';
  if (rec.theta_true) os << "# theta_true=" << fmt_double(*rec.theta_true) << '\n';
  os << (rec.dw ? "t_mid,dx,dw\n" : "t_mid,dx\n");
  for (std::size_t i = 0; i < rec.size(); ++i) {
    os << fmt_double(rec.midpoints[i]) << ',' << fmt_double(rec.dx[i]);
    if (rec.dw) os << ',' << fmt_double((*rec.dw)[i]);
    os << '\n';
  }
}

inline ObservationRecord read_observation_csv(std::istream& is) {
  ObservationRecord rec;
  bool have_T = false, have_dt = false, with_dw = false, header = false;
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      const auto eq = line.find('=');
      if (eq == std::string::npos) continue;
      auto key = line.substr(1, eq - 1);
      key.erase(0, key.find_first_not_of(' '));
      const auto val = line.substr(eq + 1);
      if (key == "T") { rec.T = std::stod(val); have_T = true; }
      else if (key == "dt") { rec.dt = std::stod(val); have_dt = true; }
      else if (key == "seed") rec.seed = std::stoull(val);
      else if (key == "theta_true") rec.theta_true = std::stod(val);
      continue;
    }
    if (!header) {
      if (line == "t_mid,dx,dw") with_dw = true;
      else if (line != "t_mid,dx") throw ConfigError("unexpected observation CSV header: " + line);
      header = true;
      if (with_dw) rec.dw.emplace();
      continue;
    }
    std::stringstream ss(line);
    std::string cell;
    std::vector<double> v;
    while (std::getline(ss, cell, ',')) v.push_back(std::stod(cell));
    if (v.size() != (with_dw ? 3u : 2u)) throw ConfigError("malformed observation CSV row");
    rec.midpoints.push_back(v[0]);
    rec.dx.push_back(v[1]);
    if (with_dw) rec.dw->push_back(v[2]);
  }
  if (!have_T || !have_dt || !header) throw ConfigError("observation CSV lacks T, dt or header");
  return rec;
}

}  // namespace periodax

#endif  // PERIODAX_IO_HPP
