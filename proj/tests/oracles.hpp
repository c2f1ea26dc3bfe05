#pragma once

// Test-only reference computations. Everything here goes through LU
// factorisations or explicit enumeration, never through the Cholesky,
// rank-one or downdate paths the library uses.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "bsdtest/linalg.hpp"
#include "bsdtest/model.hpp"
#include "bsdtest/step_down.hpp"

namespace oracle {

using bsdtest::MatrixXd;
using bsdtest::VectorXd;
using Index = Eigen::Index;

inline MatrixXd random_spd(Index m, std::mt19937_64& rng) {
  std::normal_distribution<double> n;
  MatrixXd g(m, m);
  for (Index i = 0; i < m; ++i)
    for (Index j = 0; j < m; ++j) g(i, j) = n(rng);
  MatrixXd a = g * g.transpose() / static_cast<double>(m);
  a.diagonal().array() += 0.5;
  return (a + a.transpose()) / 2.0;
}

// Correlation matrix computed by hand (not through to_correlation).
inline MatrixXd random_correlation(Index m, std::mt19937_64& rng) {
  MatrixXd a = random_spd(m, rng);
  MatrixXd r(m, m);
  for (Index i = 0; i < m; ++i)
    for (Index j = 0; j < m; ++j) r(i, j) = i == j ? 1.0 : a(i, j) / std::sqrt(a(i, i) * a(j, j));
  return r;
}

inline VectorXd random_vector(Index m, std::mt19937_64& rng, double scale = 1.0) {
  std::normal_distribution<double> n(0.0, scale);
  VectorXd x(m);
  for (Index i = 0; i < m; ++i) x(i) = n(rng);
  return x;
}

inline MatrixXd lu_inverse(const MatrixXd& a) { return a.fullPivLu().inverse(); }
inline double lu_det(const MatrixXd& a) { return a.fullPivLu().determinant(); }

inline MatrixXd sub(const MatrixXd& a, const std::vector<Index>& keep) {
  MatrixXd s(static_cast<Index>(keep.size()), static_cast<Index>(keep.size()));
  for (std::size_t i = 0; i < keep.size(); ++i)
    for (std::size_t j = 0; j < keep.size(); ++j) s(Index(i), Index(j)) = a(keep[i], keep[j]);
  return s;
}

inline VectorXd sub(const VectorXd& x, const std::vector<Index>& keep) {
  VectorXd s(static_cast<Index>(keep.size()));
  for (std::size_t i = 0; i < keep.size(); ++i) s(Index(i)) = x(keep[i]);
  return s;
}

inline std::vector<Index> complement(Index m, const std::vector<Index>& removed) {
  std::vector<Index> keep;
  for (Index i = 0; i < m; ++i)
    if (std::find(removed.begin(), removed.end(), i) == removed.end()) keep.push_back(i);
  return keep;
}

inline double max_rel_err(const MatrixXd& got, const MatrixXd& want) {
  return (got - want).cwiseAbs().maxCoeff() / std::max(1.0, want.cwiseAbs().maxCoeff());
}

inline double lu_log_density(const VectorXd& x, const MatrixXd& cov) {
  const auto lu = cov.fullPivLu();
  const double quad = x.dot(lu.solve(x));
  return -0.5 * (quad + std::log(lu.determinant()) +
                 static_cast<double>(x.size()) * std::log(2.0 * EIGEN_PI));
}

// log S_tj from the defining density ratio on the surviving coordinates.
inline double log_bsd_ratio(const MatrixXd& sigma, const VectorXd& x, const std::vector<Index>& removed,
                            Index j, const bsdtest::MixtureParams& params) {
  const auto keep = complement(sigma.rows(), removed);
  const MatrixXd null_cov = sub(sigma, keep);
  MatrixXd alt_cov = null_cov;
  const auto pos = std::find(keep.begin(), keep.end(), j) - keep.begin();
  alt_cov(pos, pos) += params.v;
  const VectorXd xs = sub(x, keep);
  return std::log(params.p / (1.0 - params.p)) + lu_log_density(xs, alt_cov) -
         lu_log_density(xs, null_cov);
}

struct RegressionResidual {
  double u;
  double sigma_cond;
};

// U_tj by explicit regression of x_j on the other surviving coordinates.
inline RegressionResidual regression_residual(const MatrixXd& sigma, const VectorXd& x,
                                              const std::vector<Index>& removed, Index j) {
  auto others = complement(sigma.rows(), removed);
  others.erase(std::find(others.begin(), others.end(), j));
  if (others.empty()) return {x(j) / std::sqrt(sigma(j, j)), sigma(j, j)};
  const MatrixXd s_oo = sub(sigma, others);
  VectorXd s_oj(static_cast<Index>(others.size()));
  for (std::size_t k = 0; k < others.size(); ++k) s_oj(Index(k)) = sigma(others[k], j);
  const VectorXd coef = s_oo.fullPivLu().solve(s_oj);
  const double cond = sigma(j, j) - s_oj.dot(coef);
  return {(x(j) - coef.dot(sub(x, others))) / std::sqrt(cond), cond};
}

// Step-down driver over any per-(removed, j) statistic. Ties go to the
// smallest index.
template <typename Stat>
bsdtest::StepDownResult brute_force_step_down(Index m, Stat stat, double log_threshold) {
  bsdtest::StepDownResult r;
  r.decisions.assign(static_cast<std::size_t>(m), false);
  r.trace.stop_stage = m + 1;
  std::vector<Index> removed;
  for (Index t = 1; t <= m; ++t) {
    Index best = -1;
    double best_val = 0.0;
    for (Index j : complement(m, removed)) {
      const double s = stat(removed, j);
      if (best < 0 || s > best_val) best = j, best_val = s;
    }
    const bool reject = best_val > log_threshold;
    r.trace.stages.push_back({t, best, best_val, reject});
    if (!reject) {
      r.trace.stop_stage = t;
      break;
    }
    r.decisions[static_cast<std::size_t>(best)] = true;
    removed.push_back(best);
  }
  return r;
}

// Largest-k step-up by definition: try every k from m down to 1.
inline bsdtest::DecisionVector step_up_by_definition(const std::vector<double>& pv, double level) {
  const std::size_t m = pv.size();
  std::vector<double> sorted = pv;
  std::sort(sorted.begin(), sorted.end());
  bsdtest::DecisionVector d(m, false);
  for (std::size_t k = m; k >= 1; --k) {
    if (sorted[k - 1] <= static_cast<double>(k) * level / static_cast<double>(m)) {
      for (std::size_t i = 0; i < m; ++i) d[i] = pv[i] <= sorted[k - 1];
      break;
    }
  }
  return d;
}

}  // namespace oracle
