#pragma once

// G-optimal design over a finite action set. For a distribution Q on the
// actions let M(Q) = sum_a Q(a) a a^T; the objective is
// g(Q) = max_a a^T M(Q)^{-1} a. For a spanning set the optimum equals d and
// is attained by a design supported on at most d(d+1)/2 points, which is the
// support bound enforced here.

#include <Eigen/Dense>
#include <vector>

#include "mvbandit/model.hpp"

namespace mvbandit {

struct DesignWeights {
  std::vector<int> support;      // action indices, strictly ascending
  std::vector<double> weights;   // parallel to support; positive, sums to 1
  double g_value = 0.0;          // max_a a^T M(Q)^{-1} a over the full set
  double duality_gap = 0.0;      // g_value minus the optimum for the span
  bool converged = true;
  int iterations = 0;

  double weight_of(int action_index) const;
};

// Log-det maximization by closed-form vertex, exchange, and multiplicative
// updates, started from a rank-revealing subset, then pruned to the support
// bound. max_iters of 0 selects 10 * K * d. Throws RankDeficientError if the
// actions do not span; on non-convergence returns the best iterate with
// converged = false and its duality_gap as the certificate.
DesignWeights solve_g_optimal(const ActionSet& actions, double tolerance = 1e-3,
                              int max_iters = 0);

// Same solver restricted to a subset of action indices. The subset only
// needs to span its own linear span: the problem is solved inside that
// subspace and the optimum is its dimension r <= d. Used by phased
// elimination, where survivors can collapse onto a subspace.
DesignWeights solve_g_optimal_subset(const ActionSet& actions,
                                     const std::vector<int>& subset,
                                     double tolerance = 1e-3,
                                     int max_iters = 0);

// g for an explicit weight vector over all K actions (entries may be zero).
// Throws SingularMatrixError when M(Q) is not invertible.
double g_of(const ActionSet& actions, const std::vector<double>& weights);
double g_of(const ActionSet& actions, const DesignWeights& design);

}  // namespace mvbandit
