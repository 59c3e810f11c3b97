#pragma once

// Least-squares estimation from exploration data. theta_hat solves the
// ordinary least-squares system; phi_hat regresses squared residuals minus
// omega on the same design. Variance estimates are deliberately left
// unclipped: negative components are possible and downstream decisions
// tolerate them.

#include <Eigen/Dense>
#include <vector>

namespace mvbandit {

struct Sample {
  Eigen::VectorXd action;
  double reward;
};

struct DesignMatrix {
  Eigen::MatrixXd V;
  bool ridge_applied = false;
};

// V = sum_s a_s a_s^T, plus the identity when ridge is requested.
DesignMatrix make_design_matrix(const std::vector<Sample>& pulls, int dim,
                                bool ridge);

struct Estimates {
  Eigen::VectorXd theta_hat;
  Eigen::VectorXd phi_hat;
  long long n_samples = 0;
};

// theta_hat = V^{-1} sum_s X_s a_s. Throws SingularMatrixError when V is not
// positive definite.
Eigen::VectorXd estimate_theta(const std::vector<Sample>& pulls,
                               const DesignMatrix& V);

// phi_hat = V^{-1} sum_s ((X_s - <theta_hat, a_s>)^2 - omega) a_s. The mean
// estimate is an explicit argument so callers can inject one.
Eigen::VectorXd estimate_phi(const std::vector<Sample>& pulls,
                             const Eigen::VectorXd& theta_hat,
                             const DesignMatrix& V, double omega);

Estimates estimate_all(const std::vector<Sample>& pulls, const DesignMatrix& V,
                       double omega);

// Plug-in mean-variance score <phi_hat - rho * theta_hat, action>; the omega
// offset is common to every action and drops out of comparisons.
double mv_score(const Eigen::VectorXd& theta_hat,
                const Eigen::VectorXd& phi_hat, double rho,
                const Eigen::VectorXd& action);

}  // namespace mvbandit
