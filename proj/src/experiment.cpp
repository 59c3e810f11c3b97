#include "mvbandit/experiment.hpp"

#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include "mvbandit/design.hpp"
#include "mvbandit/errors.hpp"
#include "mvbandit/format.hpp"
#include "mvbandit/rng.hpp"
#include "mvbandit/sor.hpp"

namespace mvbandit {

std::vector<std::uint64_t> SeedSpec::resolve() const {
  if (!explicit_seeds.empty()) return explicit_seeds;
  std::vector<std::uint64_t> out(static_cast<std::size_t>(count));
  for (std::size_t i = 0; i < out.size(); ++i)
    out[i] = derive_seed(master, static_cast<std::uint64_t>(i));
  return out;
}

namespace {

void reject_unknown_keys(const nlohmann::json& j,
                         std::initializer_list<const char*> allowed,
                         const std::string& where) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool ok = false;
    for (const char* key : allowed)
      if (it.key() == key) {
        ok = true;
        break;
      }
    if (!ok) throw ConfigError("unknown key \"" + it.key() + "\" in " + where);
  }
}

PolicyConfig parse_policy(const nlohmann::json& j) {
  if (!j.is_object()) throw ConfigError("each policy must be an object");
  reject_unknown_keys(j,
                      {"variant", "mode", "rho", "c_tilde", "c_hat",
                       "practical_coeff", "delta", "epsilon", "ucb_bonus",
                       "design_tolerance", "design_max_iters", "name"},
                      "policy");
  PolicyConfig pc;
  if (!j.contains("variant"))
    throw ConfigError("policy is missing required key \"variant\"");
  pc.variant = policy_variant_from_string(j.at("variant").get<std::string>());
  if (j.contains("mode"))
    pc.mode = policy_mode_from_string(j.at("mode").get<std::string>());
  pc.rho = j.value("rho", -1.0);  // negative: inherit the instance rho
  pc.c_tilde = j.value("c_tilde", 1.0);
  pc.c_hat = j.value("c_hat", 1.0);
  pc.practical_coeff = j.value("practical_coeff", 1e-4);
  pc.delta = j.value("delta", 0.0);
  pc.epsilon = j.value("epsilon", 0.0);
  pc.ucb_bonus = j.value("ucb_bonus", 0.0);
  pc.design_tolerance = j.value("design_tolerance", 1e-3);
  pc.design_max_iters = j.value("design_max_iters", 0);
  pc.name = j.value("name", std::string{});
  return pc;
}

nlohmann::json policy_to_json(const PolicyConfig& pc) {
  nlohmann::json j;
  j["variant"] = to_string(pc.variant);
  j["mode"] = to_string(pc.mode);
  if (pc.rho >= 0.0) j["rho"] = pc.rho;
  j["c_tilde"] = pc.c_tilde;
  j["c_hat"] = pc.c_hat;
  j["practical_coeff"] = pc.practical_coeff;
  j["delta"] = pc.delta;
  j["epsilon"] = pc.epsilon;
  j["ucb_bonus"] = pc.ucb_bonus;
  j["design_tolerance"] = pc.design_tolerance;
  j["design_max_iters"] = pc.design_max_iters;
  if (!pc.name.empty()) j["name"] = pc.name;
  return j;
}

std::vector<PolicyConfig> standard_policies() {
  std::vector<PolicyConfig> ps(4);
  ps[0].variant = PolicyVariant::RISE;
  ps[1].variant = PolicyVariant::RISEPP;
  ps[2].variant = PolicyVariant::MV_UCB;
  ps[3].variant = PolicyVariant::MV_EXPEXP;
  for (auto& p : ps) p.rho = -1.0;
  return ps;
}

}  // namespace

RunConfig parse_run_config(const nlohmann::json& j) {
  if (!j.is_object()) throw ConfigError("run config must be a JSON object");
  reject_unknown_keys(j,
                      {"scenario", "S", "T", "checkpoints", "seeds", "policies",
                       "output_dir", "jobs", "dump_design",
                       "dump_trajectories", "enumeration_cap"},
                      "run config");
  RunConfig cfg;
  cfg.scenario = j.value("scenario", std::string("I"));
  cfg.S = j.value("S", 4);
  cfg.T = j.value("T", 100000LL);
  cfg.checkpoints = j.value("checkpoints", 100);
  if (j.contains("seeds")) {
    const auto& s = j.at("seeds");
    if (s.is_array()) {
      cfg.seeds.explicit_seeds = s.get<std::vector<std::uint64_t>>();
    } else if (s.is_object()) {
      reject_unknown_keys(s, {"master", "count"}, "seeds");
      cfg.seeds.master = s.value("master", kDefaultMasterSeed);
      cfg.seeds.count = s.value("count", 20);
    } else {
      throw ConfigError("seeds must be an array or {master, count}");
    }
  }
  if (j.contains("policies")) {
    if (!j.at("policies").is_array())
      throw ConfigError("policies must be an array");
    for (const auto& pj : j.at("policies"))
      cfg.policies.push_back(parse_policy(pj));
  }
  if (cfg.policies.empty()) cfg.policies = standard_policies();
  cfg.output_dir = j.value("output_dir", std::string{});
  cfg.jobs = j.value("jobs", 1);
  cfg.dump_design = j.value("dump_design", false);
  cfg.dump_trajectories = j.value("dump_trajectories", false);
  cfg.enumeration_cap = j.value("enumeration_cap", 1000000LL);
  return cfg;
}

RunConfig load_run_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("config " + path + " is not valid JSON: " + e.what());
  }
  return parse_run_config(j);
}

nlohmann::json run_config_to_json(const RunConfig& cfg) {
  nlohmann::json j;
  j["scenario"] = cfg.scenario;
  j["S"] = cfg.S;
  j["T"] = cfg.T;
  j["checkpoints"] = cfg.checkpoints;
  if (!cfg.seeds.explicit_seeds.empty()) {
    j["seeds"] = cfg.seeds.explicit_seeds;
  } else {
    j["seeds"] = {{"master", cfg.seeds.master}, {"count", cfg.seeds.count}};
  }
  nlohmann::json ps = nlohmann::json::array();
  for (const auto& p : cfg.policies) ps.push_back(policy_to_json(p));
  j["policies"] = std::move(ps);
  j["output_dir"] = cfg.output_dir;
  j["jobs"] = cfg.jobs;
  j["dump_design"] = cfg.dump_design;
  j["dump_trajectories"] = cfg.dump_trajectories;
  j["enumeration_cap"] = cfg.enumeration_cap;
  return j;
}

RunConfig preset(const std::string& name) {
  RunConfig cfg;
  cfg.T = 100000;
  cfg.checkpoints = 100;
  cfg.seeds.master = kDefaultMasterSeed;
  cfg.seeds.count = 20;
  cfg.policies = standard_policies();
  if (name == "fig1") {
    cfg.scenario = "I";
    cfg.S = 4;
  } else if (name == "fig2") {
    cfg.scenario = "II";
    cfg.S = 4;
  } else if (name == "fig3") {
    cfg.scenario = "III";
    cfg.S = 4;
  } else if (name == "fig4") {
    cfg.scenario = "III";
    cfg.S = 8;
  } else {
    throw ConfigError("unknown preset \"" + name +
                      "\"; expected fig1, fig2, fig3, or fig4");
  }
  return cfg;
}

void validate_run_config(const RunConfig& cfg) {
  if (cfg.T < 10) throw ConfigError("T must be at least 10");
  if (cfg.S < 1) throw ConfigError("S must be at least 1");
  if (cfg.checkpoints < 2) throw ConfigError("checkpoints must be at least 2");
  if (cfg.seeds.explicit_seeds.empty() && cfg.seeds.count < 1)
    throw ConfigError("seed count must be at least 1");
  if (cfg.jobs < 1) throw ConfigError("jobs must be at least 1");
  if (cfg.enumeration_cap < 1)
    throw ConfigError("enumeration_cap must be at least 1");
  bool named = cfg.scenario == "I" || cfg.scenario == "II" ||
               cfg.scenario == "III";
  if (!named && !std::filesystem::exists(cfg.scenario))
    throw ConfigError("scenario \"" + cfg.scenario +
                      "\" is neither a named scenario nor an existing file");
  // An empty list means the standard four; validate what would actually run.
  const std::vector<PolicyConfig> pols =
      cfg.policies.empty() ? standard_policies() : cfg.policies;
  for (const auto& p : pols) {
    PolicyConfig probe = p;
    probe.T = cfg.T;
    if (probe.rho < 0.0) probe.rho = 0.0;  // resolved from the instance later
    probe.validate();
  }
}

MVInstance build_instance(const RunConfig& cfg) {
  if (cfg.scenario == "I" || cfg.scenario == "II" || cfg.scenario == "III") {
    SorSpec spec = load_scenario(cfg.scenario);
    return to_instance(spec, cfg.S, cfg.enumeration_cap);
  }
  return load_instance(cfg.scenario);
}

namespace {

std::string resolve_output_dir(const RunConfig& cfg) {
  if (!cfg.output_dir.empty()) return cfg.output_dir;
  if (const char* env = std::getenv(kOutputDirEnvVar); env && *env)
    return env;
  return "out";
}

struct TaskResult {
  std::vector<double> curve;
  long long exploration_length = -1;
  int committed_action = -1;
};

std::string config_hash_hex(const nlohmann::json& echo) {
  const std::string text = echo.dump();
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace

ExperimentResult run_experiment(const RunConfig& cfg_in) {
  validate_run_config(cfg_in);
  RunConfig cfg = cfg_in;
  if (cfg.policies.empty()) cfg.policies = standard_policies();
  const MVInstance instance = build_instance(cfg);
  const GapTable gaps = gap_table(instance);
  const std::vector<long long> checkpoints =
      log_checkpoints(cfg.T, cfg.checkpoints);
  const std::vector<std::uint64_t> seeds = cfg.seeds.resolve();
  const std::string out_dir = resolve_output_dir(cfg);
  std::filesystem::create_directories(out_dir);

  const std::size_t n_policies = cfg.policies.size();
  const std::size_t n_seeds = seeds.size();
  const std::size_t n_tasks = n_policies * n_seeds;
  std::vector<TaskResult> results(n_tasks);

  std::atomic<std::size_t> next_task{0};
  std::mutex error_mutex;
  std::exception_ptr first_error;

  auto worker = [&]() {
    for (;;) {
      std::size_t task = next_task.fetch_add(1);
      if (task >= n_tasks) return;
      {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (first_error) return;
      }
      try {
        const std::size_t p = task / n_seeds;
        const std::size_t s = task % n_seeds;
        PolicyConfig pc = cfg.policies[p];
        pc.T = cfg.T;
        if (pc.rho < 0.0) pc.rho = instance.rho;
        Environment env(instance, seeds[s]);
        Trajectory traj = run_policy(env, pc);
        TaskResult& r = results[task];
        r.curve = regret_curve(traj, gaps, checkpoints);
        r.exploration_length = traj.exploration_length;
        r.committed_action = traj.committed_action;
        if (cfg.dump_trajectories) {
          std::string stem = out_dir + "/traj_" + pc.label() + "_" +
                             std::to_string(seeds[s]);
          write_trajectory_csv(traj, stem + ".csv");
          write_trajectory_sidecar(traj, stem + ".json");
        }
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
        return;
      }
    }
  };

  const std::size_t n_threads =
      std::min<std::size_t>(static_cast<std::size_t>(cfg.jobs), n_tasks);
  if (n_threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(n_threads);
    for (std::size_t i = 0; i < n_threads; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (first_error) std::rethrow_exception(first_error);

  const nlohmann::json config_echo = run_config_to_json(cfg);
  const std::string cfg_hash = config_hash_hex(config_echo);

  ExperimentResult out;
  out.reports.reserve(n_policies);
  for (std::size_t p = 0; p < n_policies; ++p) {
    RegretReport report;
    report.policy = cfg.policies[p].label();
    report.scenario = cfg.scenario;
    report.prng_id = std::string(kRngId);
    report.config_hash = cfg_hash;
    report.checkpoints = checkpoints;
    report.seeds = seeds;
    report.per_seed.reserve(n_seeds);
    for (std::size_t s = 0; s < n_seeds; ++s)
      report.per_seed.push_back(std::move(results[p * n_seeds + s].curve));
    finalize_report(report);
    out.reports.push_back(std::move(report));
  }

  out.per_seed_path = out_dir + "/per_seed.csv";
  {
    std::ofstream csv(out.per_seed_path);
    if (!csv) throw std::runtime_error("cannot write " + out.per_seed_path);
    csv << "policy,scenario,seed,t,intermediate_regret\n";
    for (const auto& report : out.reports)
      for (std::size_t s = 0; s < n_seeds; ++s)
        for (std::size_t j = 0; j < checkpoints.size(); ++j)
          csv << report.policy << "," << report.scenario << "," << seeds[s]
              << "," << checkpoints[j] << ","
              << format_double(report.per_seed[s][j]) << "\n";
  }

  out.aggregate_path = out_dir + "/aggregate.csv";
  {
    std::ofstream csv(out.aggregate_path);
    if (!csv) throw std::runtime_error("cannot write " + out.aggregate_path);
    csv << "policy,scenario,t,mean_regret,stderr,n_seeds\n";
    for (const auto& report : out.reports)
      for (std::size_t j = 0; j < checkpoints.size(); ++j)
        csv << report.policy << "," << report.scenario << ","
            << checkpoints[j] << "," << format_double(report.mean[j]) << ","
            << format_double(report.stderr_[j]) << "," << n_seeds << "\n";
  }

  out.metadata_path = out_dir + "/metadata.json";
  {
    nlohmann::json meta;
    meta["version"] = kVersion;
    meta["prng"] = std::string(kRngId);
    meta["log_convention"] = "natural";
    meta["seed_derivation"] = "splitmix64(splitmix64(master) + index)";
    meta["config"] = config_echo;
    meta["config_hash"] = cfg_hash;
    nlohmann::json inst;
    inst["label"] = instance.label;
    inst["d"] = instance.actions.dim();
    inst["K"] = instance.actions.size();
    inst["omega"] = instance.omega;
    inst["rho"] = instance.rho;
    inst["best_index"] = gaps.best_index;
    if (cfg.scenario == "I" || cfg.scenario == "II" || cfg.scenario == "III")
      inst["rescale"] = rescale_factor(load_scenario(cfg.scenario));
    meta["instance"] = std::move(inst);
    meta["seeds"] = seeds;
    std::ofstream mf(out.metadata_path);
    if (!mf) throw std::runtime_error("cannot write " + out.metadata_path);
    mf << meta.dump(2) << "\n";
  }

  if (cfg.dump_design) {
    DesignWeights design = solve_g_optimal(instance.actions);
    nlohmann::json dj;
    dj["support"] = design.support;
    dj["weights"] = design.weights;
    dj["g"] = design.g_value;
    dj["duality_gap"] = design.duality_gap;
    dj["converged"] = design.converged;
    std::ofstream df(out_dir + "/design.json");
    if (!df) throw std::runtime_error("cannot write design.json");
    df << dj.dump(2) << "\n";
  }

  return out;
}

}  // namespace mvbandit
