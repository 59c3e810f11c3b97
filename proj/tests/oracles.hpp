#pragma once

// Test-only reference implementations, written down an independent algebraic
// path from the library so that agreement is evidence rather than tautology.

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "mvbandit/model.hpp"

namespace oracles {

// D-optimal design by multiplicative weights (w_i <- w_i * v_i / d), a
// different algorithm family from the library's Frank-Wolfe. Monotone in the
// log-det objective; returns the leverage-score certificate max_i v_i.
struct MWDesign {
  Eigen::VectorXd weights;
  double g = 0.0;
};

inline MWDesign multiplicative_weights_design(
    const std::vector<Eigen::VectorXd>& actions, int iters = 20000) {
  const int m = static_cast<int>(actions.size());
  const int d = static_cast<int>(actions.front().size());
  Eigen::MatrixXd A(d, m);
  for (int i = 0; i < m; ++i) A.col(i) = actions[i];
  Eigen::VectorXd w = Eigen::VectorXd::Constant(m, 1.0 / m);
  Eigen::VectorXd v(m);
  for (int it = 0; it < iters; ++it) {
    Eigen::MatrixXd M = A * w.asDiagonal() * A.transpose();
    Eigen::MatrixXd Minv = M.inverse();
    for (int i = 0; i < m; ++i) v[i] = A.col(i).dot(Minv * A.col(i));
    if (v.maxCoeff() <= d * (1.0 + 1e-7)) break;
    for (int i = 0; i < m; ++i) w[i] *= v[i] / d;
    w /= w.sum();
  }
  Eigen::MatrixXd M = A * w.asDiagonal() * A.transpose();
  Eigen::MatrixXd Minv = M.inverse();
  double g = 0.0;
  for (int i = 0; i < m; ++i) g = std::max(g, A.col(i).dot(Minv * A.col(i)));
  return {w, g};
}

// Gap quantities recomputed directly from instance parameters.
struct Gaps {
  std::vector<double> mu, sigma2, Delta;
  int best = 0;
};

inline Gaps direct_gaps(const mvbandit::MVInstance& inst) {
  const int K = inst.actions.size();
  Gaps g;
  g.mu.resize(K);
  g.sigma2.resize(K);
  g.Delta.resize(K);
  std::vector<double> score(K);
  for (int i = 0; i < K; ++i) {
    double mu = 0.0, var = inst.omega;
    for (int j = 0; j < inst.actions.dim(); ++j) {
      mu += inst.theta_star[j] * inst.actions[i][j];
      var += inst.phi_star[j] * inst.actions[i][j];
    }
    g.mu[i] = mu;
    g.sigma2[i] = var;
    score[i] = var - inst.rho * mu;
  }
  g.best = 0;
  for (int i = 1; i < K; ++i)
    if (score[i] < score[g.best]) g.best = i;
  for (int i = 0; i < K; ++i) g.Delta[i] = score[i] - score[g.best];
  return g;
}

// Brute-force regret proxy: plain double loop over all ordered pairs.
inline double regret_double_loop(const std::vector<long long>& counts,
                                 const Gaps& g, long long T) {
  double total = 0.0;
  const int K = static_cast<int>(counts.size());
  for (int a = 0; a < K; ++a)
    total += static_cast<double>(counts[a]) * g.Delta[a];
  double cross = 0.0;
  for (int a = 0; a < K; ++a)
    for (int b = 0; b < K; ++b) {
      if (a == b) continue;
      double gamma = g.mu[a] - g.mu[b];
      cross += static_cast<double>(counts[a]) *
               static_cast<double>(counts[b]) * gamma * gamma;
    }
  return total + cross / static_cast<double>(T);
}

// Composition counter by recursion, no binomial formula.
inline long long count_compositions(int d, int S) {
  if (d == 1) return 1;
  long long total = 0;
  for (int v = 0; v <= S; ++v) total += count_compositions(d - 1, S - v);
  return total;
}

// Reference mean-variance: explicit two passes.
inline double mean_variance_reference(const std::vector<double>& x,
                                      double rho) {
  if (x.empty()) throw std::invalid_argument("empty");
  double mean = 0.0;
  for (double v : x) mean += v;
  mean /= static_cast<double>(x.size());
  double out = 0.0;
  for (double v : x) out += (v - mean) * (v - mean) - rho * v;
  return out;
}

}  // namespace oracles
