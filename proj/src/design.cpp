#include "mvbandit/design.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "mvbandit/errors.hpp"

namespace mvbandit {
namespace {

constexpr double kTrimWeight = 1e-7;

struct CoreResult {
  Eigen::VectorXd w;
  double g = std::numeric_limits<double>::infinity();
  int iterations = 0;
  bool converged = false;
};

struct LeverageState {
  Eigen::MatrixXd Z;  // M(w)^{-1} B
  Eigen::VectorXd v;  // diagonal leverages
};

LeverageState leverage_state(const Eigen::MatrixXd& B,
                             const Eigen::VectorXd& w) {
  Eigen::MatrixXd M = B * w.asDiagonal() * B.transpose();
  Eigen::LLT<Eigen::MatrixXd> llt(M);
  if (llt.info() != Eigen::Success)
    throw SingularMatrixError("design moment matrix is not positive definite");
  LeverageState st;
  st.Z = llt.solve(B);
  st.v = (B.array() * st.Z.array()).colwise().sum();
  return st;
}

// Each round applies three closed-form updates, every one monotone in
// log det M(w): a vertex step toward the worst-covered column, an exchange
// moving mass from the best-covered support atom to the worst-covered column
// (which can zero an atom exactly, keeping the support lean), and a
// multiplicative rebalance of the support. Columns of B must span the row
// space and the initial weights must make M positive definite. Keeps the best
// iterate seen, so the return value is monotone in max_iters.
CoreResult solve_core(const Eigen::MatrixXd& B, Eigen::VectorXd w, double tol,
                      int max_iters) {
  const int r = static_cast<int>(B.rows());
  const int m = static_cast<int>(B.cols());
  const double target = r * (1.0 + tol);
  CoreResult best;
  best.w = w;
  for (int it = 0;; ++it) {
    LeverageState st = leverage_state(B, w);
    int imax = 0;
    double vmax = st.v.maxCoeff(&imax);
    if (vmax < best.g) {
      best.g = vmax;
      best.w = w;
    }
    best.iterations = it;
    if (vmax <= target) {
      best.converged = true;
      break;
    }
    if (it >= max_iters) break;

    // Vertex step: maximizer of log det((1-gamma) M + gamma b b^T) over
    // gamma; vmax > r >= 1 here so the step is positive.
    double gamma = (vmax / r - 1.0) / (vmax - 1.0);
    gamma = std::clamp(gamma, 0.0, 1.0 - 1e-12);
    w *= (1.0 - gamma);
    w[imax] += gamma;

    // Exchange step: shift delta from the lowest-leverage support atom to
    // the highest-leverage column. det scales by
    // 1 + delta (A - C) - delta^2 (A C - X^2), maximized in closed form.
    st = leverage_state(B, w);
    vmax = st.v.maxCoeff(&imax);
    int imin = -1;
    double vmin = std::numeric_limits<double>::infinity();
    for (int i = 0; i < m; ++i)
      if (w[i] > 0.0 && st.v[i] < vmin) {
        vmin = st.v[i];
        imin = i;
      }
    if (imin >= 0 && imin != imax && vmax > vmin) {
      const double A = st.v[imax];
      const double C = st.v[imin];
      const double X = B.col(imax).dot(st.Z.col(imin));
      const double den = 2.0 * (A * C - X * X);
      if (den > 1e-300) {
        double delta = (A - C) / den;
        if (delta > 0.0) {
          if (delta >= w[imin]) {
            delta = w[imin];
            w[imin] = 0.0;
          } else {
            w[imin] -= delta;
          }
          w[imax] += delta;
        }
      }
    }

    // Multiplicative rebalance of the support: w_i <- w_i v_i / r.
    st = leverage_state(B, w);
    double total = 0.0;
    for (int i = 0; i < m; ++i) {
      if (w[i] > 0.0) w[i] *= st.v[i] / r;
      total += w[i];
    }
    w /= total;
  }
  return best;
}

Eigen::VectorXd moment_vech(const Eigen::VectorXd& a) {
  const int r = static_cast<int>(a.size());
  Eigen::VectorXd v(r * (r + 1) / 2);
  int k = 0;
  for (int p = 0; p < r; ++p)
    for (int q = p; q < r; ++q) v[k++] = a[p] * a[q];
  return v;
}

// One exact Caratheodory elimination: moves mass along a null direction of
// the moment map (which fixes M and the total mass) until a support atom
// hits zero. Shrinks the support by at least one atom.
void caratheodory_step(const Eigen::MatrixXd& B, std::vector<int>& sup,
                       std::vector<double>& w) {
  const int r = static_cast<int>(B.rows());
  const int s = static_cast<int>(sup.size());
  const int rows = r * (r + 1) / 2 + 1;
  Eigen::MatrixXd Bs(rows, s);
  for (int j = 0; j < s; ++j) {
    Bs.col(j).head(rows - 1) = moment_vech(B.col(sup[j]));
    Bs(rows - 1, j) = 1.0;
  }
  Eigen::VectorXd c;
  if (s > rows) {
    Eigen::FullPivLU<Eigen::MatrixXd> lu(Bs);
    Eigen::MatrixXd kern = lu.kernel();
    c = kern.col(0);
  }
  if (c.size() == 0 || c.cwiseAbs().maxCoeff() < 1e-12) {
    // Degenerate-kernel fallback; callers keep s > rows so this direction is
    // still an exact or near-exact null vector.
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(Bs, Eigen::ComputeFullV);
    c = svd.matrixV().col(s - 1);
  }
  c /= c.cwiseAbs().maxCoeff();
  if (c.maxCoeff() <= 0.0) c = -c;
  double t = std::numeric_limits<double>::infinity();
  int jstar = -1;
  for (int j = 0; j < s; ++j) {
    if (c[j] > 1e-14 && w[j] / c[j] < t) {
      t = w[j] / c[j];
      jstar = j;
    }
  }
  std::vector<int> nsup;
  std::vector<double> nw;
  double total = 0.0;
  for (int j = 0; j < s; ++j) {
    double wj = (j == jstar) ? 0.0 : w[j] - t * c[j];
    if (wj > 1e-12) {
      nsup.push_back(sup[j]);
      nw.push_back(wj);
      total += wj;
    }
  }
  for (auto& wj : nw) wj /= total;
  sup = std::move(nsup);
  w = std::move(nw);
}

void trim_small(std::vector<int>& sup, std::vector<double>& w, double floor) {
  std::vector<int> nsup;
  std::vector<double> nw;
  double total = 0.0;
  for (std::size_t j = 0; j < w.size(); ++j) {
    if (w[j] >= floor) {
      nsup.push_back(sup[j]);
      nw.push_back(w[j]);
      total += w[j];
    }
  }
  for (auto& wj : nw) wj /= total;
  sup = std::move(nsup);
  w = std::move(nw);
}

double full_certificate(const Eigen::MatrixXd& B, const std::vector<int>& sup,
                        const std::vector<double>& w) {
  const int r = static_cast<int>(B.rows());
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(r, r);
  for (std::size_t j = 0; j < sup.size(); ++j)
    M.noalias() += w[j] * B.col(sup[j]) * B.col(sup[j]).transpose();
  Eigen::LLT<Eigen::MatrixXd> llt(M);
  if (llt.info() != Eigen::Success)
    throw SingularMatrixError("pruned design lost positive definiteness");
  Eigen::MatrixXd Z = llt.solve(B);
  return (B.array() * Z.array()).colwise().sum().maxCoeff();
}

// Solve over the columns of B (spanning R^r), prune to the support bound
// r(r+1)/2, and certify against the full column set. Retries with a tighter
// interior solve when pruning eats too much of the tolerance budget.
DesignWeights solve_with_basis(const Eigen::MatrixXd& B, double tol,
                               int max_iters) {
  const int r = static_cast<int>(B.rows());
  const int m = static_cast<int>(B.cols());
  const int support_bound = r * (r + 1) / 2;
  if (max_iters <= 0) max_iters = 10 * m * r;

  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(B);
  Eigen::VectorXd w0 = Eigen::VectorXd::Zero(m);
  for (int j = 0; j < r; ++j) w0[qr.colsPermutation().indices()[j]] = 1.0 / r;

  const double target = r * (1.0 + tol);
  DesignWeights out;
  double best_cert = std::numeric_limits<double>::infinity();
  int total_iters = 0;
  double slack = 0.8;
  for (int attempt = 0; attempt < 3; ++attempt, slack *= 0.25) {
    CoreResult core = solve_core(B, w0, tol * slack, max_iters);
    total_iters += core.iterations;
    std::vector<int> sup;
    std::vector<double> wts;
    for (int i = 0; i < m; ++i)
      if (core.w[i] > 0.0) {
        sup.push_back(i);
        wts.push_back(core.w[i]);
      }
    trim_small(sup, wts, kTrimWeight);
    // Above support_bound + 1 atoms the moment map has a genuine null
    // direction, so each elimination is exact.
    while (static_cast<int>(sup.size()) > support_bound + 1)
      caratheodory_step(B, sup, wts);
    double cert = full_certificate(B, sup, wts);
    if (static_cast<int>(sup.size()) > support_bound) {
      // One atom over the bound, where no exact elimination exists in
      // general: drop each atom in turn (lightest first), re-solve on the
      // remainder, and keep the best certified candidate.
      const std::size_t s = sup.size();
      std::vector<std::size_t> order(s);
      for (std::size_t j = 0; j < s; ++j) order[j] = j;
      std::sort(order.begin(), order.end(),
                [&](std::size_t a, std::size_t b) { return wts[a] < wts[b]; });
      double drop_cert = std::numeric_limits<double>::infinity();
      std::vector<int> drop_sup;
      std::vector<double> drop_w;
      for (std::size_t j : order) {
        std::vector<int> cand;
        for (std::size_t k = 0; k < s; ++k)
          if (k != j) cand.push_back(sup[k]);
        Eigen::MatrixXd Bc(r, cand.size());
        for (std::size_t k = 0; k < cand.size(); ++k)
          Bc.col(k) = B.col(cand[k]);
        if (Eigen::ColPivHouseholderQR<Eigen::MatrixXd>(Bc).rank() < r)
          continue;
        Eigen::VectorXd wc =
            Eigen::VectorXd::Constant(cand.size(), 1.0 / cand.size());
        CoreResult sub = solve_core(Bc, wc, tol * 0.5, 50 * r * support_bound);
        total_iters += sub.iterations;
        std::vector<int> csup;
        std::vector<double> cw;
        double csum = 0.0;
        for (std::size_t k = 0; k < cand.size(); ++k)
          if (sub.w[k] >= kTrimWeight) {
            csup.push_back(cand[k]);
            cw.push_back(sub.w[k]);
            csum += sub.w[k];
          }
        for (auto& x : cw) x /= csum;
        double cand_cert = full_certificate(B, csup, cw);
        if (cand_cert < drop_cert) {
          drop_cert = cand_cert;
          drop_sup = std::move(csup);
          drop_w = std::move(cw);
        }
        if (drop_cert <= target) break;
      }
      if (!drop_sup.empty()) {
        sup = std::move(drop_sup);
        wts = std::move(drop_w);
        cert = drop_cert;
      }
    }
    if (cert > target) {
      // Re-balance within the reduced support; its atoms still span R^r.
      Eigen::MatrixXd Bs(r, sup.size());
      for (std::size_t j = 0; j < sup.size(); ++j) Bs.col(j) = B.col(sup[j]);
      Eigen::VectorXd ws = Eigen::Map<Eigen::VectorXd>(wts.data(), wts.size());
      CoreResult polish =
          solve_core(Bs, ws, tol * 0.9, 50 * r * support_bound);
      total_iters += polish.iterations;
      std::vector<int> psup;
      std::vector<double> pw;
      for (std::size_t j = 0; j < sup.size(); ++j)
        if (polish.w[j] >= kTrimWeight) {
          psup.push_back(sup[j]);
          pw.push_back(polish.w[j]);
        }
      double psum = 0.0;
      for (double x : pw) psum += x;
      for (auto& x : pw) x /= psum;
      sup = std::move(psup);
      wts = std::move(pw);
      cert = full_certificate(B, sup, wts);
    }
    if (cert < best_cert) {
      best_cert = cert;
      out.support = sup;
      out.weights = wts;
    }
    if (cert <= target) break;
  }
  out.g_value = best_cert;
  out.duality_gap = best_cert - r;
  out.converged = best_cert <= target;
  out.iterations = total_iters;
  return out;
}

}  // namespace

double DesignWeights::weight_of(int action_index) const {
  auto it = std::lower_bound(support.begin(), support.end(), action_index);
  if (it == support.end() || *it != action_index) return 0.0;
  return weights[it - support.begin()];
}

DesignWeights solve_g_optimal(const ActionSet& actions, double tolerance,
                              int max_iters) {
  Eigen::MatrixXd A = actions.as_matrix();
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(A);
  int rank = static_cast<int>(qr.rank());
  if (rank < actions.dim()) throw RankDeficientError(rank, actions.dim());
  return solve_with_basis(A, tolerance, max_iters);
}

DesignWeights solve_g_optimal_subset(const ActionSet& actions,
                                     const std::vector<int>& subset,
                                     double tolerance, int max_iters) {
  if (subset.empty())
    throw std::invalid_argument("design subset must be nonempty");
  const int d = actions.dim();
  Eigen::MatrixXd Asub(d, subset.size());
  for (std::size_t j = 0; j < subset.size(); ++j)
    Asub.col(j) = actions[subset[j]];
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(Asub);
  int rank = static_cast<int>(qr.rank());
  if (rank == 0) throw RankDeficientError(0, d);
  Eigen::MatrixXd B;
  if (rank == d) {
    B = Asub;
  } else {
    Eigen::MatrixXd thinQ =
        qr.householderQ() * Eigen::MatrixXd::Identity(d, rank);
    B = thinQ.transpose() * Asub;
  }
  DesignWeights local = solve_with_basis(B, tolerance, max_iters);
  for (auto& idx : local.support) idx = subset[idx];
  // Remap can break the ascending order when subset is unsorted.
  std::vector<std::size_t> order(local.support.size());
  for (std::size_t j = 0; j < order.size(); ++j) order[j] = j;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return local.support[a] < local.support[b];
  });
  DesignWeights out = local;
  for (std::size_t j = 0; j < order.size(); ++j) {
    out.support[j] = local.support[order[j]];
    out.weights[j] = local.weights[order[j]];
  }
  return out;
}

double g_of(const ActionSet& actions, const std::vector<double>& weights) {
  const int K = actions.size();
  if (static_cast<int>(weights.size()) != K)
    throw std::invalid_argument("weight vector must have one entry per action");
  double sum = 0.0;
  for (double w : weights) {
    if (w < 0.0) throw std::invalid_argument("design weights must be nonnegative");
    sum += w;
  }
  if (std::abs(sum - 1.0) > 1e-6)
    throw std::invalid_argument("design weights must sum to 1");
  const int d = actions.dim();
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(d, d);
  for (int i = 0; i < K; ++i)
    if (weights[i] > 0.0)
      M.noalias() += weights[i] * actions[i] * actions[i].transpose();
  Eigen::LLT<Eigen::MatrixXd> llt(M);
  if (llt.info() != Eigen::Success)
    throw SingularMatrixError("moment matrix of the given weights");
  double gmax = 0.0;
  for (int i = 0; i < K; ++i) {
    double v = actions[i].dot(llt.solve(actions[i]));
    gmax = std::max(gmax, v);
  }
  return gmax;
}

double g_of(const ActionSet& actions, const DesignWeights& design) {
  std::vector<double> dense(actions.size(), 0.0);
  for (std::size_t j = 0; j < design.support.size(); ++j)
    dense[design.support[j]] = design.weights[j];
  return g_of(actions, dense);
}

}  // namespace mvbandit
