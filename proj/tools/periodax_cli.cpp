// Command-line front end: one JSON config in, one CSV or JSON result out.
//
//   periodax <subcommand> --config run.json --out result.{csv,json} [--workers N]
//            [--log-level error|warn|info|debug] [--profile-out profile.csv]
//
// Exit status: 0 success, 2 configuration error, 3 runtime fault.

#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "periodax/periodax.hpp"

namespace {

using periodax::json;

enum class Level { error = 0, warn = 1, info = 2, debug = 3 };

Level g_level = Level::warn;

void log(Level lvl, const std::string& msg) {
  static const char* names[] = {"error", "warn", "info", "debug"};
  if (lvl <= g_level) std::cerr << "[" << names[static_cast<int>(lvl)] << "] " << msg << '\n';
}

void report_error(const char* kind, const std::string& msg) {
  std::cerr << json{{"error", kind}, {"message", msg}}.dump() << '\n';
}

std::string config_hash(const json& j) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : j.dump()) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

json read_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw periodax::ConfigError("cannot open config file " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw periodax::ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw periodax::RuntimeFault("cannot open output file " + path);
  out << content;
  if (!out) throw periodax::RuntimeFault("failed writing " + path);
}

int resolve_workers(int flag) {
  if (flag > 0) return flag;
  if (const char* env = std::getenv("PERIODAX_WORKERS")) {
    try {
      std::size_t pos = 0;
      const int v = std::stoi(env, &pos);
      if (pos == std::string(env).size() && v > 0) return v;
    } catch (const std::exception&) {
    }
    throw periodax::ConfigError("PERIODAX_WORKERS must be a positive integer");
  }
  return 1;
}

struct Invocation {
  std::string command;
  std::string config_path;
  std::string out_path;
  std::string profile_out;
  int workers = 1;
};

std::string csv_preamble(const std::string& command, const json& cfg) {
  return "# periodax " + command + "\n# config_hash=" + config_hash(cfg) + "\n";
}

json with_hash(json result, const json& cfg) {
  result["config_hash"] = config_hash(cfg);
  return result;
}

// Simulation block for subcommands that observe a freshly simulated record:
// the sampling bounds default to what the estimator needs.
periodax::SimulationConfig sim_for_estimation(const json& j, const periodax::WeightSequence& w,
                                              const periodax::EstimatorConfig& est) {
  auto s = periodax::simulation_from_json(j);
  s.K_max = std::max({s.K_max, s.f.max_freq(), w.max_weighted_freq()});
  s.alpha_lo = j.value("alpha_lo", est.theta_lo);
  return s;
}

std::string run_simulate(const Invocation&, const json& cfg) {
  const auto s = periodax::simulation_from_json(cfg);
  const auto rec = periodax::simulate_observation(s);
  log(Level::info, "simulated " + std::to_string(rec.size()) + " increments");
  std::ostringstream os;
  os << csv_preamble("simulate", cfg);
  periodax::write_observation_csv(os, rec);
  return os.str();
}

std::string run_estimate(const Invocation& inv, const json& cfg) {
  auto est = periodax::estimator_from_json(cfg.at("estimator"));
  est.workers = inv.workers;
  periodax::ObservationRecord rec;
  periodax::WeightSequence w;
  if (cfg.contains("observation")) {
    std::ifstream in(cfg["observation"].get<std::string>());
    if (!in) throw periodax::ConfigError("cannot open observation file " + cfg["observation"].get<std::string>());
    rec = periodax::read_observation_csv(in);
    w = periodax::weights_from_json(cfg.at("weights"), rec.T).weights;
  } else {
    const double T = cfg.at("T").get<double>();
    w = periodax::weights_from_json(cfg.at("weights"), T).weights;
    rec = periodax::simulate_observation(sim_for_estimation(cfg, w, est));
  }
  const auto tr = periodax::estimate_period(rec, w, est);
  log(Level::info, "theta_star=" + periodax::fmt_double(tr.theta_star));
  if (!inv.profile_out.empty()) {
    std::ostringstream ps;
    ps << csv_preamble("estimate", cfg);
    periodax::write_profile_csv(ps, tr.profile);
    write_file(inv.profile_out, ps.str());
  }
  return with_hash(periodax::trace_to_json(tr), cfg).dump(2) + "\n";
}

std::string run_pinsker(const Invocation&, const json& cfg) {
  const auto s = periodax::pinsker_solution(cfg.at("beta").get<double>(), cfg.at("L").get<double>(),
                                            cfg.at("T").get<double>());
  return with_hash(periodax::pinsker_to_json(s), cfg).dump(2) + "\n";
}

std::string run_mc_risk(const Invocation& inv, const json& cfg) {
  auto ex = periodax::experiment_from_json(cfg);
  ex.workers = inv.workers;
  ex.est.workers = 1;
  const auto mode = cfg.value("mode", std::string("risk"));
  std::ostringstream os;
  if (mode == "paired") {
    const auto p = periodax::compare_estimators(ex);
    os << csv_preamble("mc-risk", cfg);
    os << "n_reps,n_effective,mean_sq_diff,std_error,second_order_predicted,ratio_to_second_order,correlation,"
          "risk_theta_star,risk_one_step\n";
    os << p.n_reps << ',' << p.n_effective << ',' << periodax::fmt_double(p.mean_sq_diff) << ','
       << periodax::fmt_double(p.std_error) << ',' << periodax::fmt_double(p.second_order_predicted) << ','
       << periodax::fmt_double(p.ratio_to_second_order) << ',' << periodax::fmt_double(p.correlation) << ','
       << periodax::fmt_double(p.risk_theta_star) << ',' << periodax::fmt_double(p.risk_one_step) << '\n';
    return os.str();
  }
  if (mode != "risk") throw periodax::ConfigError("mc-risk mode must be \"risk\" or \"paired\"");
  const auto rep = periodax::run_mc_risk(ex);
  log(Level::info, "normalized_risk=" + periodax::fmt_double(rep.normalized_risk) +
                       " outliers=" + std::to_string(rep.outlier_count));
  os << csv_preamble("mc-risk", cfg);
  periodax::write_risk_csv(os, rep);
  return os.str();
}

std::string run_rate_curve(const Invocation& inv, const json& cfg) {
  const auto T_list = cfg.at("T_list").get<std::vector<double>>();
  const auto& sj = cfg.at("scheme");
  periodax::WeightScheme scheme;
  if (sj.contains("pinsker"))
    scheme = periodax::WeightScheme::make_pinsker(sj["pinsker"].at("beta").get<double>(),
                                                  sj["pinsker"].at("L").get<double>());
  else if (sj.contains("projection"))
    scheme = periodax::WeightScheme::make_projection(sj["projection"].get<int>());
  else
    throw periodax::ConfigError("scheme needs \"pinsker\" or \"projection\"");
  const int measure_reps = cfg.value("measure_reps", 0);
  if (measure_reps < 0) throw periodax::ConfigError("measure_reps must be >= 0");

  // The base experiment only carries f, theta, the search interval and seeds;
  // weights and T are rebuilt per row.
  periodax::ExperimentConfig base;
  json model = cfg;
  model["T"] = T_list.empty() ? 1.0 : T_list.front();
  base.sim = periodax::simulation_from_json(model);
  base.est = periodax::estimator_from_json(cfg.at("estimator"));
  base.master_seed = cfg.value("master_seed", std::uint64_t{1});
  base.workers = inv.workers;
  base.weights = periodax::projection_weights(2);
  const auto table = periodax::second_order_curve(base, T_list, scheme, measure_reps);
  std::ostringstream os;
  os << csv_preamble("rate-curve", cfg);
  periodax::write_curve_csv(os, table);
  return os.str();
}

std::string run_gamma_scan(const Invocation&, const json& cfg) {
  const auto f = periodax::signal_from_json(cfg.at("signal"));
  const double theta = cfg.at("theta").get<double>();
  const double T = cfg.at("T").get<double>();
  const auto w = periodax::weights_from_json(cfg.at("weights"), T).weights;
  const double lo = cfg.at("tau_lo").get<double>(), hi = cfg.at("tau_hi").get<double>();
  const int n = cfg.at("n_points").get<int>();
  if (!(lo > 0.0 && hi > lo) || n < 2) throw periodax::ConfigError("gamma-scan needs 0 < tau_lo < tau_hi, n_points >= 2");
  periodax::CriterionProfile p;
  for (int i = 0; i < n; ++i) {
    const double tau = lo + (hi - lo) * i / (n - 1);
    p.taus.push_back(tau);
    p.values.push_back(periodax::gamma_oracle(f, theta, w, T, tau));
  }
  std::ostringstream os;
  os << csv_preamble("gamma-scan", cfg);
  periodax::write_profile_csv(os, p, "Gamma");
  return os.str();
}

std::string run_validate_weights(const Invocation&, const json& cfg) {
  const auto T_grid = cfg.at("T_grid").get<std::vector<double>>();
  if (T_grid.empty()) throw periodax::ConfigError("T_grid must be nonempty");
  const auto w = periodax::weights_from_json(cfg.at("weights"), T_grid.back()).weights;
  const auto f = periodax::signal_from_json(cfg.at("signal"));
  const auto rep = periodax::validate_weights(w, f, T_grid, cfg.value("rho1", 0.5), cfg.value("C1", 1e5));
  return with_hash(periodax::validation_to_json(rep), cfg).dump(2) + "\n";
}

using Runner = std::string (*)(const Invocation&, const json&);

const std::map<std::string, Runner>& runners() {
  static const std::map<std::string, Runner> table{
      {"simulate", run_simulate},       {"estimate", run_estimate},
      {"pinsker", run_pinsker},         {"mc-risk", run_mc_risk},
      {"rate-curve", run_rate_curve},   {"gamma-scan", run_gamma_scan},
      {"validate-weights", run_validate_weights},
  };
  return table;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Semi-parametric period estimation: simulation, estimation and Monte Carlo risk studies"};
  app.require_subcommand(1);
  Invocation inv;
  int workers_flag = 0;
  std::string level = "warn";
  for (const auto& [name, fn] : runners()) {
    (void)fn;
    auto* sub = app.add_subcommand(name);
    sub->add_option("--config", inv.config_path, "JSON run configuration")->required();
    sub->add_option("--out", inv.out_path, "output file (CSV or JSON)")->required();
    sub->add_option("--workers", workers_flag, "worker threads (fallback: PERIODAX_WORKERS)")
        ->check(CLI::PositiveNumber);
    sub->add_option("--log-level", level, "error, warn, info or debug")
        ->check(CLI::IsMember({"error", "warn", "info", "debug"}));
    if (name == "estimate") sub->add_option("--profile-out", inv.profile_out, "criterion profile CSV");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  inv.command = app.get_subcommands().front()->get_name();
  g_level = level == "error" ? Level::error : level == "info" ? Level::info : level == "debug" ? Level::debug : Level::warn;

  try {
    inv.workers = resolve_workers(workers_flag);
    const json cfg = read_config(inv.config_path);
    log(Level::debug, "config_hash=" + config_hash(cfg));
    const std::string out = runners().at(inv.command)(inv, cfg);
    write_file(inv.out_path, out);
    return 0;
  } catch (const periodax::ConfigError& e) {
    report_error("config", e.what());
    return 2;
  } catch (const json::exception& e) {
    report_error("config", e.what());
    return 2;
  } catch (const periodax::RuntimeFault& e) {
    report_error("runtime", e.what());
    return 3;
  } catch (const std::exception& e) {
    report_error("runtime", e.what());
    return 3;
  }
}
