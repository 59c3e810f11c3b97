#pragma once

// Problem model: a finite action set on the unit ball, a linear mean vector
// theta*, a linear variance vector phi* with offset omega, and the risk
// tolerance rho. Rewards are Gaussian with mean <theta*, a> and variance
// <phi*, a> + omega; the mean-variance score of an action is
// variance - rho * mean, lower being better.

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "mvbandit/rng.hpp"

namespace mvbandit {

inline constexpr double kNormSlack = 1e-12;

class ActionSet {
 public:
  explicit ActionSet(std::vector<Eigen::VectorXd> actions);

  int dim() const noexcept { return dim_; }
  int size() const noexcept { return static_cast<int>(actions_.size()); }
  const Eigen::VectorXd& operator[](int i) const { return actions_.at(i); }
  const std::vector<Eigen::VectorXd>& actions() const noexcept { return actions_; }

  // Actions as columns of a d x K matrix.
  Eigen::MatrixXd as_matrix() const;

 private:
  std::vector<Eigen::VectorXd> actions_;
  int dim_ = 0;
};

struct MVInstance {
  MVInstance(ActionSet actions, Eigen::VectorXd theta_star,
             Eigen::VectorXd phi_star, double omega, double rho,
             std::string label = {});

  ActionSet actions;
  Eigen::VectorXd theta_star;
  Eigen::VectorXd phi_star;
  double omega;
  double rho;
  std::string label;
  // Range of reward variances over the action set, fixed at construction.
  double sigma2_min = 0.0;
  double sigma2_max = 0.0;
};

double mean_of(const MVInstance& inst, int index);
double variance_of(const MVInstance& inst, int index);

// One replication's reward source. Instances are immutable and shareable;
// each Environment owns its own generator state.
class Environment {
 public:
  Environment(const MVInstance& inst, std::uint64_t seed);

  // Draws one reward for the given action, advancing the generator state
  // exactly once per call.
  double sample_reward(int index);

  const MVInstance& instance() const noexcept { return *inst_; }
  std::uint64_t seed() const noexcept { return seed_; }
  Xoshiro256pp& rng() noexcept { return rng_; }

 private:
  const MVInstance* inst_;
  std::uint64_t seed_;
  Xoshiro256pp rng_;
  Eigen::VectorXd means_;
  Eigen::VectorXd stds_;
};

// JSON instance format:
//   {d, K, actions, theta_star, phi_star, omega, rho, label}
// with actions as a K-row array of length-d arrays. Doubles survive a
// save/load round trip bit for bit.
std::string instance_to_json(const MVInstance& inst);
MVInstance instance_from_json(const std::string& text);
void save_instance(const MVInstance& inst, const std::string& path);
MVInstance load_instance(const std::string& path);

}  // namespace mvbandit
