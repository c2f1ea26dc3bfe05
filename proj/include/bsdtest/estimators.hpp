#pragma once

#include <optional>

#include "bsdtest/covariance.hpp"

namespace bsdtest {

struct EstimatorConfig {
  double gamma = 0.25;
  /// Defaults: p in [1/m, 1 - 1/m] (both 1/2 when m < 2), V >= 1e-6.
  std::optional<double> p_floor;
  std::optional<double> p_ceiling;
  double v_floor = 1e-6;

  void validate() const;
  double p_floor_for(Eigen::Index m) const;
  double p_ceiling_for(Eigen::Index m) const;
};

struct Estimate {
  double raw = 0.0;
  double clamped = 0.0;
};

/// Characteristic-function estimate of the non-null proportion:
///   1 - m^{gamma - 1} sum_j cos(sqrt(2 gamma log m) x_j).
Estimate estimate_p(const VectorXd& x, const EstimatorConfig& cfg = {});

/// Moment estimate of the slab variance: (mean(x^2) - 1) / p_hat.
Estimate estimate_v(const VectorXd& x, double p_hat, const EstimatorConfig& cfg = {});

/// E[cos(t Z1) cos(t Z2)] for (Z1, Z2) bivariate normal with standard
/// deviations s1, s2 and correlation rho, t = sqrt(2 gamma log m).
double cosine_moment(double s1, double s2, double rho, double m, double gamma);

/// (1 / (m^2 p^2)) sum_{j != j'} (m^{-gamma s_jj'} - m^{gamma s_jj'})^2.
/// Computed in closed form for structured families, so m may be large.
double weak_dependence_condition(const CovarianceFamily& family, double p, double gamma);

}  // namespace bsdtest
