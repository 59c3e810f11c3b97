#pragma once

// Evaluation side: true per-action means, variances and gaps, the empirical
// mean-variance objective, and the pull-count regret proxy
//   sum_a tau_a Delta_a + (1/T) sum_{a != b} tau_a tau_b Gamma_{a,b}^2
// evaluated on trajectory prefixes at log-spaced checkpoints.

#include <Eigen/Dense>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "mvbandit/model.hpp"
#include "mvbandit/policies.hpp"

namespace mvbandit {

struct GapTable {
  Eigen::VectorXd mu;      // true means
  Eigen::VectorXd sigma2;  // true variances
  int best_index = 0;      // argmin of sigma2 - rho * mu, lowest index on ties
  Eigen::VectorXd Delta;   // mean-variance gap to best_index, >= 0
  Eigen::MatrixXd Gamma;   // Gamma(a, b) = mu[a] - mu[b]
};

GapTable gap_table(const MVInstance& inst);

// Unnormalized mean-variance of a reward sequence:
// sum_t (X_t - mean)^2 - rho * sum_t X_t. Two-pass; throws on empty input.
double mean_variance(std::span<const double> rewards, double rho);

// Regret proxy for pull counts that sum to T. The pair sum runs over ordered
// pairs of distinct played actions.
double intermediate_regret(const std::vector<long long>& pull_counts,
                           const GapTable& gaps, long long T);
double intermediate_regret(const Trajectory& traj, const GapTable& gaps,
                           long long T);

struct VarianceDecomposition {
  double total = 0.0;    // (1/T) sum_t (X_t - mean)^2
  double within = 0.0;   // (1/T) sum_a tau_a * var_a
  double between = 0.0;  // (1/T) sum_a tau_a * (mean_a - mean)^2
};

// Splits the realized reward variance by arm; total == within + between.
VarianceDecomposition variance_decomposition_check(const Trajectory& traj);

// count log-spaced integer checkpoints in [10, T], deduplicated ascending;
// the first is 10 and the last is T. Requires T >= 10.
std::vector<long long> log_checkpoints(long long T, int count = 100);

// Regret proxy of each trajectory prefix ending at the checkpoints.
std::vector<double> regret_curve(const Trajectory& traj, const GapTable& gaps,
                                 const std::vector<long long>& checkpoints);

struct RegretReport {
  std::string policy;
  std::string scenario;
  std::string prng_id;
  std::string config_hash;
  std::vector<long long> checkpoints;
  std::vector<std::uint64_t> seeds;
  std::vector<std::vector<double>> per_seed;  // [seed][checkpoint]
  std::vector<double> mean;
  std::vector<double> stderr_;
};

// Mean and standard error across seeds; rows are kept in seed order so the
// merge is independent of completion order.
void finalize_report(RegretReport& report);

}  // namespace mvbandit
