#include "mvbandit/estimate.hpp"

#include "mvbandit/errors.hpp"

namespace mvbandit {

DesignMatrix make_design_matrix(const std::vector<Sample>& pulls, int dim,
                                bool ridge) {
  DesignMatrix out;
  out.V = Eigen::MatrixXd::Zero(dim, dim);
  if (ridge) out.V.setIdentity();
  out.ridge_applied = ridge;
  for (const auto& s : pulls)
    out.V.noalias() += s.action * s.action.transpose();
  return out;
}

namespace {

Eigen::LLT<Eigen::MatrixXd> factor(const DesignMatrix& V) {
  Eigen::LLT<Eigen::MatrixXd> llt(V.V);
  if (llt.info() != Eigen::Success)
    throw SingularMatrixError("design matrix V is not positive definite");
  return llt;
}

}  // namespace

Eigen::VectorXd estimate_theta(const std::vector<Sample>& pulls,
                               const DesignMatrix& V) {
  auto llt = factor(V);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(V.V.rows());
  for (const auto& s : pulls) rhs.noalias() += s.reward * s.action;
  return llt.solve(rhs);
}

Eigen::VectorXd estimate_phi(const std::vector<Sample>& pulls,
                             const Eigen::VectorXd& theta_hat,
                             const DesignMatrix& V, double omega) {
  auto llt = factor(V);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(V.V.rows());
  for (const auto& s : pulls) {
    double resid = s.reward - theta_hat.dot(s.action);
    rhs.noalias() += (resid * resid - omega) * s.action;
  }
  return llt.solve(rhs);
}

Estimates estimate_all(const std::vector<Sample>& pulls, const DesignMatrix& V,
                       double omega) {
  Estimates est;
  est.theta_hat = estimate_theta(pulls, V);
  est.phi_hat = estimate_phi(pulls, est.theta_hat, V, omega);
  est.n_samples = static_cast<long long>(pulls.size());
  return est;
}

double mv_score(const Eigen::VectorXd& theta_hat,
                const Eigen::VectorXd& phi_hat, double rho,
                const Eigen::VectorXd& action) {
  return (phi_hat - rho * theta_hat).dot(action);
}

}  // namespace mvbandit
