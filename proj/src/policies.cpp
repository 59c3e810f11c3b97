#include "mvbandit/policies.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>

#include "json.hpp"
#include "mvbandit/design.hpp"
#include "mvbandit/errors.hpp"
#include "mvbandit/estimate.hpp"
#include "mvbandit/format.hpp"

namespace mvbandit {

std::string to_string(PolicyVariant v) {
  switch (v) {
    case PolicyVariant::RISE: return "RISE";
    case PolicyVariant::RISEPP: return "RISEPP";
    case PolicyVariant::MV_UCB: return "MV_UCB";
    case PolicyVariant::MV_EXPEXP: return "MV_EXPEXP";
    case PolicyVariant::RANDOM: return "RANDOM";
  }
  return "?";
}

PolicyVariant policy_variant_from_string(const std::string& name) {
  if (name == "RISE") return PolicyVariant::RISE;
  if (name == "RISEPP") return PolicyVariant::RISEPP;
  if (name == "MV_UCB") return PolicyVariant::MV_UCB;
  if (name == "MV_EXPEXP") return PolicyVariant::MV_EXPEXP;
  if (name == "RANDOM") return PolicyVariant::RANDOM;
  throw ConfigError("unknown policy variant \"" + name + "\"");
}

std::string to_string(PolicyMode m) {
  return m == PolicyMode::Practical ? "practical" : "theoretical";
}

PolicyMode policy_mode_from_string(const std::string& name) {
  if (name == "practical") return PolicyMode::Practical;
  if (name == "theoretical") return PolicyMode::Theoretical;
  throw ConfigError("unknown policy mode \"" + name + "\"");
}

void PolicyConfig::validate() const {
  if (T < 1) throw ConfigError("policy T must be at least 1");
  if (!(rho >= 0.0)) throw ConfigError("policy rho must be nonnegative");
  if (!(c_tilde > 0.0)) throw ConfigError("c_tilde must be positive");
  if (!(c_hat > 0.0)) throw ConfigError("c_hat must be positive");
  if (!(practical_coeff > 0.0))
    throw ConfigError("practical_coeff must be positive");
  if (delta != 0.0 && !(delta > 0.0 && delta < 1.0))
    throw ConfigError("delta must lie in (0, 1) when given");
  if (epsilon != 0.0 && !(epsilon > 0.0))
    throw ConfigError("epsilon must be positive when given");
  if (ucb_bonus != 0.0 && !(ucb_bonus > 0.0))
    throw ConfigError("ucb_bonus must be positive when given");
  if (!(design_tolerance > 0.0))
    throw ConfigError("design_tolerance must be positive");
}

long long rise_exploration_budget(int d, long long T) {
  if (d < 1 || T < 1)
    throw ConfigError("exploration budget needs d >= 1 and T >= 1");
  // Smallest n with n^3 >= d^3 T^2, i.e. n = ceil(d * T^(2/3)) evaluated in
  // exact integer arithmetic so boundary cases never round the wrong way.
  auto cube = [](long long x) {
    return static_cast<unsigned __int128>(x) * static_cast<unsigned __int128>(x) *
           static_cast<unsigned __int128>(x);
  };
  unsigned __int128 rhs = cube(d) * static_cast<unsigned __int128>(T) *
                          static_cast<unsigned __int128>(T);
  long long n = std::llroundl(static_cast<long double>(d) *
                              powl(static_cast<long double>(T), 2.0L / 3.0L));
  if (n < 1) n = 1;
  while (n > 1 && cube(n - 1) >= rhs) --n;
  while (cube(n) < rhs) ++n;
  return n;
}

long long expexp_per_arm_budget(long long T) {
  if (T < 1) throw ConfigError("per-arm budget needs T >= 1");
  // Smallest m with 196 m^3 >= T^2, i.e. m = ceil((T/14)^(2/3)).
  auto lhs = [](long long x) {
    return static_cast<unsigned __int128>(196) * static_cast<unsigned __int128>(x) *
           static_cast<unsigned __int128>(x) * static_cast<unsigned __int128>(x);
  };
  unsigned __int128 rhs =
      static_cast<unsigned __int128>(T) * static_cast<unsigned __int128>(T);
  long long m = std::llroundl(
      powl(static_cast<long double>(T) / 14.0L, 2.0L / 3.0L));
  if (m < 1) m = 1;
  while (m > 1 && lhs(m - 1) >= rhs) --m;
  while (lhs(m) < rhs) ++m;
  return m;
}

namespace {

Trajectory make_trajectory(long long T, int K) {
  Trajectory traj;
  traj.chosen.reserve(static_cast<std::size_t>(T));
  traj.rewards.reserve(static_cast<std::size_t>(T));
  traj.pull_counts.assign(K, 0);
  return traj;
}

void pull(Trajectory& traj, Environment& env, int action) {
  traj.chosen.push_back(action);
  traj.rewards.push_back(env.sample_reward(action));
  ++traj.pull_counts[action];
}

long long remaining(const Trajectory& traj, long long T) {
  return T - static_cast<long long>(traj.chosen.size());
}

// Budgets can be astronomically large in theoretical mode; anything beyond
// the horizon behaves identically, so clamp instead of overflowing.
long long to_budget(long double x) {
  if (!(x > 0.0L)) return 0;
  if (x >= 4.0e18L) return static_cast<long long>(4e18);
  return static_cast<long long>(ceill(x));
}

int argmin_score(const Eigen::VectorXd& theta_hat,
                 const Eigen::VectorXd& phi_hat, double rho,
                 const ActionSet& actions) {
  Eigen::VectorXd dir = phi_hat - rho * theta_hat;
  int best = 0;
  double best_score = dir.dot(actions[0]);
  for (int i = 1; i < actions.size(); ++i) {
    double s = dir.dot(actions[i]);
    if (s < best_score) {
      best_score = s;
      best = i;
    }
  }
  return best;
}

}  // namespace

Trajectory run_rise(Environment& env, const PolicyConfig& cfg) {
  cfg.validate();
  const MVInstance& inst = env.instance();
  const int d = inst.actions.dim();
  const long long T = cfg.T;
  Trajectory traj = make_trajectory(T, inst.actions.size());

  DesignWeights design =
      solve_g_optimal(inst.actions, cfg.design_tolerance, cfg.design_max_iters);
  const std::size_t s = design.support.size();
  std::vector<long long> budget(s, 0);
  if (cfg.mode == PolicyMode::Practical) {
    const long long n = rise_exploration_budget(d, T);
    long long total = 0;
    for (std::size_t j = 0; j < s; ++j) {
      budget[j] = to_budget(static_cast<long double>(n) * design.weights[j]);
      total += budget[j];
    }
    // Rounding up overshoots; trim the excess from the largest budgets,
    // lowest index first on ties, so the total comes back to n exactly.
    while (total > n) {
      std::size_t jmax = 0;
      for (std::size_t j = 1; j < s; ++j)
        if (budget[j] > budget[jmax]) jmax = j;
      --budget[jmax];
      --total;
    }
    while (total < n) {  // only reachable through floating-point shortfall
      ++budget[0];
      ++total;
    }
  } else {
    const double eps =
        cfg.epsilon > 0.0
            ? cfg.epsilon
            : d * std::pow(static_cast<double>(T), -1.0 / 3.0);
    const double delta = cfg.delta > 0.0 ? cfg.delta : 1.0 / static_cast<double>(T);
    const double lg = std::log(1.0 / delta);
    const long double base = static_cast<long double>(cfg.c_tilde) * cfg.c_tilde *
                             d * d * std::log(static_cast<double>(d)) * lg * lg *
                             design.g_value / (eps * eps);
    for (std::size_t j = 0; j < s; ++j)
      budget[j] = to_budget(base * design.weights[j]);
  }

  std::vector<Sample> samples;
  bool truncated = false;
  for (std::size_t j = 0; j < s && !truncated; ++j) {
    const int action = design.support[j];
    for (long long i = 0; i < budget[j]; ++i) {
      if (remaining(traj, T) == 0) {
        truncated = true;
        break;
      }
      pull(traj, env, action);
      samples.push_back({inst.actions[action], traj.rewards.back()});
    }
  }
  traj.exploration_length = static_cast<long long>(traj.chosen.size());

  if (remaining(traj, T) > 0) {
    int commit = 0;
    try {
      DesignMatrix V = make_design_matrix(samples, d, /*ridge=*/false);
      Estimates est = estimate_all(samples, V, inst.omega);
      commit = argmin_score(est.theta_hat, est.phi_hat, cfg.rho, inst.actions);
    } catch (const SingularMatrixError&) {
      commit = 0;  // degenerate exploration; fall back to the first action
    }
    traj.committed_action = commit;
    while (remaining(traj, T) > 0) pull(traj, env, commit);
  }
  return traj;
}

Trajectory run_risepp(Environment& env, const PolicyConfig& cfg) {
  cfg.validate();
  const MVInstance& inst = env.instance();
  const int d = inst.actions.dim();
  const int K = inst.actions.size();
  const long long T = cfg.T;
  Trajectory traj = make_trajectory(T, K);

  std::vector<int> active(K);
  for (int i = 0; i < K; ++i) active[i] = i;

  for (int phase = 1; remaining(traj, T) > 0; ++phase) {
    if (active.size() == 1) {
      traj.committed_action = active[0];
      while (remaining(traj, T) > 0) pull(traj, env, active[0]);
      break;
    }
    const double eps = std::exp2(-phase);
    DesignWeights design = solve_g_optimal_subset(
        inst.actions, active, cfg.design_tolerance, cfg.design_max_iters);

    long double base;
    if (cfg.mode == PolicyMode::Practical) {
      const long double logterm =
          logl(static_cast<long double>(K) * T * T);
      base = static_cast<long double>(cfg.practical_coeff) * d * d * d *
             std::log(static_cast<double>(d)) * logterm * logterm / (eps * eps);
    } else {
      const double delta =
          cfg.delta > 0.0 ? cfg.delta : 1.0 / static_cast<double>(T);
      const long double logterm =
          logl(static_cast<long double>(K) * T / delta);
      base = static_cast<long double>(cfg.c_hat) * cfg.c_hat * d * d *
             design.g_value * std::log(static_cast<double>(d)) * logterm *
             logterm / (eps * eps);
    }

    PhaseRecord record;
    record.phase = phase;
    record.epsilon = eps;
    record.active = active;
    record.budgets.assign(active.size(), 0);
    std::vector<long long> support_budget(design.support.size(), 0);
    for (std::size_t j = 0; j < design.support.size(); ++j) {
      // Every support atom gets at least one pull; a phase that samples
      // nothing would never advance.
      support_budget[j] =
          std::max<long long>(1, to_budget(base * design.weights[j]));
      auto it = std::lower_bound(active.begin(), active.end(),
                                 design.support[j]);
      record.budgets[it - active.begin()] = support_budget[j];
    }
    traj.phase_log.push_back(record);

    std::vector<Sample> samples;
    bool truncated = false;
    for (std::size_t j = 0; j < design.support.size() && !truncated; ++j) {
      const int action = design.support[j];
      for (long long i = 0; i < support_budget[j]; ++i) {
        if (remaining(traj, T) == 0) {
          truncated = true;
          break;
        }
        pull(traj, env, action);
        samples.push_back({inst.actions[action], traj.rewards.back()});
      }
    }
    if (truncated) break;

    DesignMatrix V = make_design_matrix(samples, d, /*ridge=*/true);
    Estimates est = estimate_all(samples, V, inst.omega);
    active = risepp_eliminate(active, inst.actions, est.theta_hat,
                              est.phi_hat, cfg.rho, eps);
  }
  return traj;
}

std::vector<int> risepp_eliminate(const std::vector<int>& active,
                                  const ActionSet& actions,
                                  const Eigen::VectorXd& theta_hat,
                                  const Eigen::VectorXd& phi_hat, double rho,
                                  double eps) {
  if (active.empty())
    throw std::invalid_argument("elimination needs a nonempty active set");
  Eigen::VectorXd dir = rho * theta_hat - phi_hat;
  std::vector<double> score(active.size());
  double smax = -std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < active.size(); ++j) {
    score[j] = dir.dot(actions[active[j]]);
    smax = std::max(smax, score[j]);
  }
  std::vector<int> next;
  for (std::size_t j = 0; j < active.size(); ++j)
    if (smax - score[j] <= 2.0 * eps) next.push_back(active[j]);
  return next;
}

Trajectory run_mv_ucb(Environment& env, const PolicyConfig& cfg) {
  cfg.validate();
  const MVInstance& inst = env.instance();
  const int K = inst.actions.size();
  const long long T = cfg.T;
  Trajectory traj = make_trajectory(T, K);

  const double delta =
      cfg.delta > 0.0 ? cfg.delta : 1.0 / (static_cast<double>(T) * T);
  const double bonus_coeff = cfg.ucb_bonus > 0.0 ? cfg.ucb_bonus : 5.0 + cfg.rho;
  const double lg = std::log(1.0 / delta);

  std::vector<double> count(K, 0.0), mean(K, 0.0), m2(K, 0.0);
  auto update = [&](int a, double x) {
    count[a] += 1.0;
    double d1 = x - mean[a];
    mean[a] += d1 / count[a];
    m2[a] += d1 * (x - mean[a]);
  };

  for (long long t = 0; t < T; ++t) {
    int a;
    if (t < K) {
      a = static_cast<int>(t);  // one sweep; the first T actions when T < K
    } else {
      a = 0;
      double best = std::numeric_limits<double>::infinity();
      for (int i = 0; i < K; ++i) {
        double mv = m2[i] / count[i] - cfg.rho * mean[i];
        double score = mv - bonus_coeff * std::sqrt(lg / (2.0 * count[i]));
        if (score < best) {
          best = score;
          a = i;
        }
      }
    }
    pull(traj, env, a);
    update(a, traj.rewards.back());
  }
  return traj;
}

Trajectory run_mv_expexp(Environment& env, const PolicyConfig& cfg) {
  cfg.validate();
  const MVInstance& inst = env.instance();
  const int K = inst.actions.size();
  const long long T = cfg.T;
  Trajectory traj = make_trajectory(T, K);

  const long long per_arm = expexp_per_arm_budget(T);
  std::vector<double> count(K, 0.0), mean(K, 0.0), m2(K, 0.0);
  bool truncated = false;
  for (long long round = 0; round < per_arm && !truncated; ++round) {
    for (int a = 0; a < K; ++a) {
      if (remaining(traj, T) == 0) {
        truncated = true;
        break;
      }
      pull(traj, env, a);
      double x = traj.rewards.back();
      count[a] += 1.0;
      double d1 = x - mean[a];
      mean[a] += d1 / count[a];
      m2[a] += d1 * (x - mean[a]);
    }
  }
  traj.exploration_length = static_cast<long long>(traj.chosen.size());

  if (remaining(traj, T) > 0) {
    int commit = 0;
    double best = std::numeric_limits<double>::infinity();
    for (int a = 0; a < K; ++a) {
      double mv = m2[a] / count[a] - cfg.rho * mean[a];
      if (mv < best) {
        best = mv;
        commit = a;
      }
    }
    traj.committed_action = commit;
    while (remaining(traj, T) > 0) pull(traj, env, commit);
  }
  return traj;
}

Trajectory run_random(Environment& env, const PolicyConfig& cfg) {
  cfg.validate();
  const int K = env.instance().actions.size();
  Trajectory traj = make_trajectory(cfg.T, K);
  for (long long t = 0; t < cfg.T; ++t)
    pull(traj, env,
         static_cast<int>(env.rng().uniform_below(static_cast<std::uint64_t>(K))));
  return traj;
}

Trajectory run_policy(Environment& env, const PolicyConfig& cfg) {
  switch (cfg.variant) {
    case PolicyVariant::RISE: return run_rise(env, cfg);
    case PolicyVariant::RISEPP: return run_risepp(env, cfg);
    case PolicyVariant::MV_UCB: return run_mv_ucb(env, cfg);
    case PolicyVariant::MV_EXPEXP: return run_mv_expexp(env, cfg);
    case PolicyVariant::RANDOM: return run_random(env, cfg);
  }
  throw ConfigError("unhandled policy variant");
}

void write_trajectory_csv(const Trajectory& traj, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << "t,action_index,reward\n";
  for (std::size_t t = 0; t < traj.chosen.size(); ++t)
    out << t << "," << traj.chosen[t] << "," << format_double(traj.rewards[t])
        << "\n";
}

void write_trajectory_sidecar(const Trajectory& traj, const std::string& path) {
  nlohmann::json j;
  j["pull_counts"] = traj.pull_counts;
  j["exploration_length"] = traj.exploration_length;
  j["committed_action"] = traj.committed_action;
  nlohmann::json phases = nlohmann::json::array();
  for (const auto& rec : traj.phase_log) {
    nlohmann::json p;
    p["phase"] = rec.phase;
    p["epsilon"] = rec.epsilon;
    p["active"] = rec.active;
    p["budgets"] = rec.budgets;
    phases.push_back(std::move(p));
  }
  j["phase_log"] = std::move(phases);
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << j.dump(2) << "\n";
}

}  // namespace mvbandit
