#pragma once

// Smart-order-routing construction. A venue spec holds per-venue price and
// variance coefficients; splitting S shares across d venues and scaling by
// 1/S yields the action set, and the coefficient vectors (rescaled onto the
// model's norm balls when necessary) become theta* and phi*.

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "mvbandit/model.hpp"
#include "mvbandit/rng.hpp"

namespace mvbandit {

struct SorSpec {
  int d = 0;                     // venue count
  int S = 4;                     // default shares per round
  Eigen::VectorXd price_coeffs;  // p, ascending, p[0] strictly smallest
  Eigen::VectorXd var_coeffs;    // sigma^2, ascending, [0] strictly smallest
  double omega = 1.0;
  double rho = 2.0;
  std::string label;
  // Optional venue-class split: venue 0 is the market order, then dark pools,
  // then lit venues. Both zero when the split is not tracked.
  int dark_count = 0;
  int lit_count = 0;

  // Throws InvalidSpecError naming the violated inequality.
  void validate() const;
};

// Number of ways to split S shares across d venues: C(S+d-1, d-1).
long long count_allocations(int d, int S);

// All nonnegative integer d-vectors summing to S, in ascending lexicographic
// order, scaled by 1/S. Every action has unit l1 norm, hence l2 norm <= 1.
// Throws CapExceededError before allocating when the count exceeds the cap.
ActionSet enumerate_allocations(int d, int S, long long cap = 1000000);

// The three fixed desk-scale scenarios, named "I", "II", "III".
SorSpec load_scenario(const std::string& name);

// Common rescale applied to both coefficient vectors so that the instance
// satisfies its norm constraints: min(1, 1/|p|, omega/|sigma2|).
double rescale_factor(const SorSpec& spec);

// Builds the bandit instance for a given share count. The rescale factor,
// when below one, is recorded in the instance label.
MVInstance to_instance(const SorSpec& spec, int S, long long cap = 1000000);

// Random spec with 1 market + lit_count lit + dark_count dark venues;
// coefficients drawn uniformly from [lo, hi] and sorted, redrawing on the
// (measure-zero) ties that would break a strict inequality.
SorSpec sample_random_spec(Xoshiro256pp& rng, int d, int lit_count,
                           int dark_count, double lo = 0.05, double hi = 0.95,
                           double omega = 1.0, double rho = 2.0);

}  // namespace mvbandit
