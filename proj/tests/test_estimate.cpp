#include <cmath>
#include <vector>

#include "doctest.h"
#include "mvbandit/errors.hpp"
#include "mvbandit/estimate.hpp"
#include "mvbandit/rng.hpp"

using namespace mvbandit;

namespace {

Eigen::VectorXd vec(std::initializer_list<double> xs) {
  Eigen::VectorXd v(static_cast<int>(xs.size()));
  int i = 0;
  for (double x : xs) v[i++] = x;
  return v;
}

}  // namespace

TEST_CASE("design matrix accumulates outer products") {
  std::vector<Sample> pulls = {{vec({1.0, 0.0}), 1.0},
                               {vec({0.0, 1.0}), 2.0},
                               {vec({1.0, 0.0}), 3.0}};
  DesignMatrix dm = make_design_matrix(pulls, 2, false);
  CHECK_FALSE(dm.ridge_applied);
  CHECK(dm.V(0, 0) == doctest::Approx(2.0));
  CHECK(dm.V(1, 1) == doctest::Approx(1.0));
  CHECK(dm.V(0, 1) == doctest::Approx(0.0));

  DesignMatrix dr = make_design_matrix(pulls, 2, true);
  CHECK(dr.ridge_applied);
  CHECK(dr.V(0, 0) == doctest::Approx(3.0));
  CHECK(dr.V(1, 1) == doctest::Approx(2.0));
}

TEST_CASE("noiseless data is recovered exactly") {
  Eigen::VectorXd theta = vec({0.4, -0.3, 0.2});
  std::vector<Sample> pulls;
  Xoshiro256pp rng(77);
  for (int s = 0; s < 30; ++s) {
    Eigen::VectorXd a(3);
    for (int j = 0; j < 3; ++j) a[j] = rng.normal();
    a /= std::max(1.0, a.norm());
    pulls.push_back({a, theta.dot(a)});
  }
  DesignMatrix dm = make_design_matrix(pulls, 3, false);
  Eigen::VectorXd th = estimate_theta(pulls, dm);
  CHECK((th - theta).norm() < 1e-10);
  // With exact means every residual is zero, so phi_hat solves
  // V phi = sum_s (-omega) a_s.
  Eigen::VectorXd ph = estimate_phi(pulls, th, dm, 0.0);
  CHECK(ph.norm() < 1e-10);
}

TEST_CASE("estimates converge on noisy linear variance data") {
  // Ground truth within the model class; large sample so both stages settle.
  Eigen::VectorXd theta = vec({0.5, -0.2});
  Eigen::VectorXd phi = vec({0.3, 0.1});
  const double omega = 0.6;
  Xoshiro256pp rng(4242);
  std::vector<Sample> pulls;
  const int n = 60000;
  pulls.reserve(n);
  for (int s = 0; s < n; ++s) {
    Eigen::VectorXd a(2);
    double ang = 2.0 * M_PI * rng.uniform01();
    a[0] = 0.5 * (1.0 + std::cos(ang)) * 0.9;
    a[1] = 0.5 * (1.0 + std::sin(ang)) * 0.9;
    a /= std::max(1.0, a.norm());
    double var = phi.dot(a) + omega;
    double x = theta.dot(a) + std::sqrt(var) * rng.normal();
    pulls.push_back({a, x});
  }
  Estimates est = estimate_all(pulls, make_design_matrix(pulls, 2, false),
                               omega);
  CHECK(est.n_samples == n);
  CHECK((est.theta_hat - theta).norm() < 0.05);
  CHECK((est.phi_hat - phi).norm() < 0.15);
}

TEST_CASE("singular design matrix raises") {
  std::vector<Sample> pulls = {{vec({1.0, 0.0}), 1.0}};
  DesignMatrix dm = make_design_matrix(pulls, 2, false);
  CHECK_THROWS_AS(estimate_theta(pulls, dm), SingularMatrixError);
  // The ridged version of the same data is solvable.
  DesignMatrix dr = make_design_matrix(pulls, 2, true);
  Eigen::VectorXd th = estimate_theta(pulls, dr);
  CHECK(th[0] == doctest::Approx(0.5));
  CHECK(th[1] == doctest::Approx(0.0));
}

TEST_CASE("variance estimates are not clipped") {
  // One action pulled twice with huge spread, another with tiny spread, and
  // omega in between forces a negative component.
  std::vector<Sample> pulls = {{vec({1.0, 0.0}), 10.0},
                               {vec({1.0, 0.0}), -10.0},
                               {vec({0.0, 1.0}), 0.0},
                               {vec({0.0, 1.0}), 0.0}};
  DesignMatrix dm = make_design_matrix(pulls, 2, false);
  Eigen::VectorXd th = estimate_theta(pulls, dm);
  CHECK(th[0] == doctest::Approx(0.0));
  CHECK(th[1] == doctest::Approx(0.0));
  Eigen::VectorXd ph = estimate_phi(pulls, th, dm, 5.0);
  CHECK(ph[0] == doctest::Approx(95.0));
  CHECK(ph[1] == doctest::Approx(-5.0));
}

TEST_CASE("mv score is the plug-in inner product") {
  Eigen::VectorXd th = vec({0.2, 0.4});
  Eigen::VectorXd ph = vec({0.5, 0.1});
  Eigen::VectorXd a = vec({0.6, 0.8});
  double rho = 2.0;
  double expect = (0.5 - rho * 0.2) * 0.6 + (0.1 - rho * 0.4) * 0.8;
  CHECK(mv_score(th, ph, rho, a) == doctest::Approx(expect));
}
