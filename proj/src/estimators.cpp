#include "bsdtest/estimators.hpp"

#include <algorithm>
#include <cmath>

namespace bsdtest {

void EstimatorConfig::validate() const {
  if (!(gamma > 0.0 && gamma < 0.5)) throw DomainError("estimator: gamma must lie in (0, 1/2)");
  if (p_floor && !(*p_floor > 0.0)) throw DomainError("estimator: p_floor must be positive");
  if (p_ceiling && !(*p_ceiling < 1.0)) throw DomainError("estimator: p_ceiling must be below 1");
  if (!(v_floor > 0.0)) throw DomainError("estimator: v_floor must be positive");
}

double EstimatorConfig::p_floor_for(Eigen::Index m) const {
  if (p_floor) return *p_floor;
  return m < 2 ? 0.5 : 1.0 / static_cast<double>(m);
}

double EstimatorConfig::p_ceiling_for(Eigen::Index m) const {
  if (p_ceiling) return *p_ceiling;
  return m < 2 ? 0.5 : 1.0 - 1.0 / static_cast<double>(m);
}

Estimate estimate_p(const VectorXd& x, const EstimatorConfig& cfg) {
  cfg.validate();
  const Eigen::Index n = x.size();
  if (n < 1) throw DomainError("estimate_p: empty data");
  const double m = static_cast<double>(n);
  const double t = std::sqrt(2.0 * cfg.gamma * std::log(m));
  const double cos_sum = (t * x.array()).cos().sum();
  Estimate e;
  e.raw = 1.0 - std::pow(m, cfg.gamma - 1.0) * cos_sum;
  e.clamped = std::clamp(e.raw, cfg.p_floor_for(n), std::max(cfg.p_floor_for(n), cfg.p_ceiling_for(n)));
  return e;
}

Estimate estimate_v(const VectorXd& x, double p_hat, const EstimatorConfig& cfg) {
  if (!(p_hat > 0.0)) throw DomainError("estimate_v: p_hat must be positive");
  if (x.size() < 1) throw DomainError("estimate_v: empty data");
  Estimate e;
  e.raw = (x.squaredNorm() / static_cast<double>(x.size()) - 1.0) / p_hat;
  e.clamped = std::max(e.raw, cfg.v_floor);
  return e;
}

double cosine_moment(double s1, double s2, double rho, double m, double gamma) {
  const double scale = gamma * std::log(m);
  const double ss = s1 * s1 + s2 * s2;
  const double cross = 2.0 * rho * s1 * s2;
  return 0.5 * (std::exp(-(ss + cross) * scale) + std::exp(-(ss - cross) * scale));
}

double weak_dependence_condition(const CovarianceFamily& family, double p, double gamma) {
  family.validate();
  const Eigen::Index n = family.dim;
  const double m = static_cast<double>(n);
  const double log_m = std::log(m);
  // (m^{-g s} - m^{g s})^2 = 4 sinh^2(g s log m)
  auto term = [&](double s) {
    const double sh = std::sinh(gamma * s * log_m);
    return 4.0 * sh * sh;
  };
  double sum = 0.0;
  switch (family.kind) {
    case CovarianceKind::identity: break;
    case CovarianceKind::intraclass: sum = m * (m - 1.0) * term(family.rho); break;
    case CovarianceKind::block: {
      const double f = term(family.rho);
      for (Eigen::Index start = 0; start < n; start += family.block_size) {
        const double b = static_cast<double>(std::min(family.block_size, n - start));
        sum += b * (b - 1.0) * f;
      }
      break;
    }
    case CovarianceKind::ar1: {
      double r = 1.0;
      for (Eigen::Index d = 1; d < n; ++d) {
        r *= family.rho;
        const double f = term(r);
        if (f == 0.0) break;
        sum += 2.0 * static_cast<double>(n - d) * f;
      }
      break;
    }
    case CovarianceKind::custom:
      for (Eigen::Index j = 0; j < n; ++j)
        for (Eigen::Index i = 0; i < n; ++i)
          if (i != j) sum += term(family.custom(i, j));
      break;
  }
  return sum / (m * m * p * p);
}

}  // namespace bsdtest
