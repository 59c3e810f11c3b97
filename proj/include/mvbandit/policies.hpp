#pragma once

// Allocation policies. RISE explores a G-optimal design for a fixed budget,
// estimates (theta, phi) by least squares, and commits to the plug-in
// minimizer. RISEPP runs phased elimination with per-phase designs and
// halving tolerances. MV_UCB and MV_EXPEXP treat actions as independent
// arms; RANDOM is the uniform control.

#include <cstdint>
#include <string>
#include <vector>

#include "mvbandit/model.hpp"

namespace mvbandit {

enum class PolicyVariant { RISE, RISEPP, MV_UCB, MV_EXPEXP, RANDOM };

enum class PolicyMode { Practical, Theoretical };

std::string to_string(PolicyVariant v);
PolicyVariant policy_variant_from_string(const std::string& name);
std::string to_string(PolicyMode m);
PolicyMode policy_mode_from_string(const std::string& name);

struct PolicyConfig {
  PolicyVariant variant = PolicyVariant::RISE;
  long long T = 0;
  double rho = 0.0;
  PolicyMode mode = PolicyMode::Practical;
  double c_tilde = 1.0;          // theoretical RISE budget constant
  double c_hat = 1.0;            // theoretical RISEPP budget constant
  double practical_coeff = 1e-4; // RISEPP practical budget coefficient
  double delta = 0.0;            // 0 selects 1/T where a delta is needed
  double epsilon = 0.0;          // 0 selects d * T^{-1/3} for RISE
  double ucb_bonus = 0.0;        // 0 selects 5 + rho
  double design_tolerance = 1e-3;
  int design_max_iters = 0;
  std::string name;              // output label; defaults to the variant name

  std::string label() const { return name.empty() ? to_string(variant) : name; }
  void validate() const;  // throws ConfigError naming the offending field
};

struct PhaseRecord {
  int phase = 0;
  double epsilon = 0.0;
  std::vector<int> active;          // surviving action indices, ascending
  std::vector<long long> budgets;   // planned pulls, parallel to active
};

struct Trajectory {
  std::vector<int> chosen;          // length T
  std::vector<double> rewards;      // length T
  std::vector<long long> pull_counts;  // per action, sums to T
  long long exploration_length = -1;   // RISE / MV_EXPEXP; -1 otherwise
  int committed_action = -1;           // -1 when exploration covered T
  std::vector<PhaseRecord> phase_log;  // RISEPP only
};

Trajectory run_rise(Environment& env, const PolicyConfig& cfg);
Trajectory run_risepp(Environment& env, const PolicyConfig& cfg);
Trajectory run_mv_ucb(Environment& env, const PolicyConfig& cfg);
Trajectory run_mv_expexp(Environment& env, const PolicyConfig& cfg);
Trajectory run_random(Environment& env, const PolicyConfig& cfg);
Trajectory run_policy(Environment& env, const PolicyConfig& cfg);

// ceil(d * T^(2/3)) without floating-point fuzz at integer boundaries.
long long rise_exploration_budget(int d, long long T);
// ceil((T/14)^(2/3)), the per-arm budget of MV_EXPEXP.
long long expexp_per_arm_budget(long long T);

// One elimination round: keeps action a iff
//   max_b <rho * theta_hat - phi_hat, b - a> <= 2 * eps
// over b in the active set. The empirical best always survives.
std::vector<int> risepp_eliminate(const std::vector<int>& active,
                                  const ActionSet& actions,
                                  const Eigen::VectorXd& theta_hat,
                                  const Eigen::VectorXd& phi_hat, double rho,
                                  double eps);

// CSV rows (t, action_index, reward) plus a JSON sidecar carrying pull
// counts and, for RISEPP, the phase log.
void write_trajectory_csv(const Trajectory& traj, const std::string& path);
void write_trajectory_sidecar(const Trajectory& traj, const std::string& path);

}  // namespace mvbandit
