#pragma once

#include "bsdtest/active_set.hpp"
#include "bsdtest/model.hpp"
#include "bsdtest/step_down.hpp"

namespace bsdtest {

/// log(p / (1 - p)).
double log_prior_odds(double p);

/// log S_tj from the surviving inverse columns:
///   log(p/(1-p)) - log(1 + V b_jj)/2 + V w_j^2 / (2 (1 + V b_jj)),
/// with w = inverse() * gather(x).
double bsd_stat_fast(const ActiveSet& active, Eigen::Index j, const VectorXd& x,
                     const MixtureParams& params);

/// log S for every surviving index in one pass, in position order.
VectorXd bsd_stats_fast(const ActiveSet& active, const VectorXd& x, const MixtureParams& params);

/// log S_tj as a ratio of two dense Gaussian densities on the surviving
/// coordinates. Reference path for testing; refuses more than
/// kNaiveMaxDim surviving coordinates.
inline constexpr Eigen::Index kNaiveMaxDim = 20;
double bsd_stat_naive(const ActiveSet& active, Eigen::Index j, const VectorXd& x,
                      const MixtureParams& params);

/// log S from an MRD residual u and its conditional variance.
double bsd_stat_via_mrd(const MixtureParams& params, double u, double sigma_cond);

/// Full step-down run over a dense correlation matrix.
StepDownResult bsd_step_down(const VectorXd& x, const MatrixXd& sigma, const MixtureParams& params);
/// Same, starting from a prepared active set (all indices surviving).
StepDownResult bsd_step_down(const VectorXd& x, ActiveSet active, const MixtureParams& params);

/// Step-down run for an intraclass correlation matrix (1 - rho) I + rho J,
/// using the closed-form inverse. Memory is O(m).
StepDownResult bsd_step_down_intraclass(const VectorXd& x, double rho, const MixtureParams& params);

}  // namespace bsdtest
