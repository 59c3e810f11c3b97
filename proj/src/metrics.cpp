#include "mvbandit/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mvbandit {

GapTable gap_table(const MVInstance& inst) {
  const int K = inst.actions.size();
  GapTable t;
  t.mu.resize(K);
  t.sigma2.resize(K);
  for (int i = 0; i < K; ++i) {
    t.mu[i] = mean_of(inst, i);
    t.sigma2[i] = variance_of(inst, i);
  }
  Eigen::VectorXd score = t.sigma2 - inst.rho * t.mu;
  t.best_index = 0;
  for (int i = 1; i < K; ++i)
    if (score[i] < score[t.best_index]) t.best_index = i;
  t.Delta = score.array() - score[t.best_index];
  t.Gamma.resize(K, K);
  for (int a = 0; a < K; ++a)
    for (int b = 0; b < K; ++b) t.Gamma(a, b) = t.mu[a] - t.mu[b];
  return t;
}

double mean_variance(std::span<const double> rewards, double rho) {
  if (rewards.empty())
    throw std::invalid_argument("mean_variance of an empty reward sequence");
  double sum = 0.0;
  for (double x : rewards) sum += x;
  double mean = sum / static_cast<double>(rewards.size());
  double sq = 0.0;
  for (double x : rewards) sq += (x - mean) * (x - mean);
  return sq - rho * sum;
}

double intermediate_regret(const std::vector<long long>& pull_counts,
                           const GapTable& gaps, long long T) {
  long long total = 0;
  for (long long c : pull_counts) total += c;
  if (total != T)
    throw std::invalid_argument("pull counts sum to " + std::to_string(total) +
                                ", expected T = " + std::to_string(T));
  std::vector<int> played;
  for (int a = 0; a < static_cast<int>(pull_counts.size()); ++a)
    if (pull_counts[a] > 0) played.push_back(a);
  double gap_term = 0.0;
  for (int a : played)
    gap_term += static_cast<double>(pull_counts[a]) * gaps.Delta[a];
  double pair_term = 0.0;
  for (int a : played)
    for (int b : played) {
      if (a == b) continue;
      double g = gaps.Gamma(a, b);
      pair_term += static_cast<double>(pull_counts[a]) *
                   static_cast<double>(pull_counts[b]) * g * g;
    }
  return gap_term + pair_term / static_cast<double>(T);
}

double intermediate_regret(const Trajectory& traj, const GapTable& gaps,
                           long long T) {
  return intermediate_regret(traj.pull_counts, gaps, T);
}

VarianceDecomposition variance_decomposition_check(const Trajectory& traj) {
  const auto& chosen = traj.chosen;
  const auto& rewards = traj.rewards;
  if (chosen.empty() || chosen.size() != rewards.size())
    throw std::invalid_argument("trajectory must pair every pull with a reward");
  const double T = static_cast<double>(rewards.size());
  int K = 0;
  for (int a : chosen) K = std::max(K, a + 1);
  std::vector<double> count(K, 0.0), sum(K, 0.0);
  double grand = 0.0;
  for (std::size_t t = 0; t < rewards.size(); ++t) {
    count[chosen[t]] += 1.0;
    sum[chosen[t]] += rewards[t];
    grand += rewards[t];
  }
  const double mean = grand / T;
  std::vector<double> arm_mean(K, 0.0);
  for (int a = 0; a < K; ++a)
    if (count[a] > 0.0) arm_mean[a] = sum[a] / count[a];
  VarianceDecomposition out;
  std::vector<double> sq(K, 0.0);
  for (std::size_t t = 0; t < rewards.size(); ++t) {
    double da = rewards[t] - arm_mean[chosen[t]];
    sq[chosen[t]] += da * da;
    out.total += (rewards[t] - mean) * (rewards[t] - mean);
  }
  for (int a = 0; a < K; ++a) {
    if (count[a] == 0.0) continue;
    out.within += sq[a];  // count[a] * biased arm variance
    out.between += count[a] * (arm_mean[a] - mean) * (arm_mean[a] - mean);
  }
  out.total /= T;
  out.within /= T;
  out.between /= T;
  return out;
}

std::vector<long long> log_checkpoints(long long T, int count) {
  if (T < 10) throw std::invalid_argument("checkpoints need T >= 10");
  if (count < 2) throw std::invalid_argument("checkpoint count must be >= 2");
  const double lo = std::log10(10.0);
  const double hi = std::log10(static_cast<double>(T));
  std::vector<long long> pts;
  pts.reserve(count);
  for (int i = 0; i < count; ++i) {
    double x = lo + (hi - lo) * static_cast<double>(i) / (count - 1);
    long long t = std::llround(std::pow(10.0, x));
    t = std::clamp<long long>(t, 10, T);
    if (pts.empty() || t > pts.back()) pts.push_back(t);
  }
  if (pts.back() != T) pts.push_back(T);
  return pts;
}

std::vector<double> regret_curve(const Trajectory& traj, const GapTable& gaps,
                                 const std::vector<long long>& checkpoints) {
  std::vector<long long> counts(gaps.mu.size(), 0);
  std::vector<double> out;
  out.reserve(checkpoints.size());
  long long t = 0;
  for (long long cp : checkpoints) {
    if (cp > static_cast<long long>(traj.chosen.size()))
      throw std::invalid_argument("checkpoint beyond trajectory length");
    for (; t < cp; ++t) ++counts[traj.chosen[t]];
    out.push_back(intermediate_regret(counts, gaps, cp));
  }
  return out;
}

void finalize_report(RegretReport& report) {
  const std::size_t n = report.per_seed.size();
  const std::size_t m = report.checkpoints.size();
  report.mean.assign(m, 0.0);
  report.stderr_.assign(m, 0.0);
  if (n == 0) return;
  for (const auto& row : report.per_seed)
    for (std::size_t j = 0; j < m; ++j) report.mean[j] += row[j];
  for (auto& x : report.mean) x /= static_cast<double>(n);
  if (n < 2) return;
  for (const auto& row : report.per_seed)
    for (std::size_t j = 0; j < m; ++j) {
      double dmean = row[j] - report.mean[j];
      report.stderr_[j] += dmean * dmean;
    }
  for (auto& x : report.stderr_)
    x = std::sqrt(x / static_cast<double>(n - 1)) /
        std::sqrt(static_cast<double>(n));
}

}  // namespace mvbandit
