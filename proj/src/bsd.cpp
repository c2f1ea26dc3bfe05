#include "bsdtest/bsd.hpp"

#include <cmath>
#include <limits>
#include <numeric>

namespace bsdtest {

double log_prior_odds(double p) { return std::log(p) - std::log1p(-p); }

namespace {

// Statistic from the pieces of one inverse column: b = b_jj, w = sum_k b_kj x_k.
double fast_formula(double lpo, double v, double b, double w) {
  const double denom = 1.0 + v * b;
  return lpo - 0.5 * std::log1p(v * b) + v * w * w / (2.0 * denom);
}

double log_threshold(double delta) { return std::log(delta); }

// Argmax with ties going to the smallest original index.
bool better(double value, Eigen::Index index, double best_value, Eigen::Index best_index) {
  return value > best_value || (value == best_value && index < best_index);
}

}  // namespace

double bsd_stat_fast(const ActiveSet& active, Eigen::Index j, const VectorXd& x,
                     const MixtureParams& params) {
  const Eigen::Index pos = active.position(j);
  const VectorXd xs = active.gather(x);
  const auto inv = active.inverse();
  const double w = inv.col(pos).dot(xs);
  return fast_formula(log_prior_odds(params.p), params.v, inv(pos, pos), w);
}

VectorXd bsd_stats_fast(const ActiveSet& active, const VectorXd& x, const MixtureParams& params) {
  const VectorXd xs = active.gather(x);
  const auto inv = active.inverse();
  VectorXd w(xs.size());
  w.noalias() = inv * xs;
  const double lpo = log_prior_odds(params.p);
  VectorXd out(xs.size());
  for (Eigen::Index k = 0; k < xs.size(); ++k) out(k) = fast_formula(lpo, params.v, inv(k, k), w(k));
  return out;
}

double bsd_stat_naive(const ActiveSet& active, Eigen::Index j, const VectorXd& x,
                      const MixtureParams& params) {
  if (active.size() > kNaiveMaxDim)
    throw DomainError("bsd_stat_naive: reference path limited to " + std::to_string(kNaiveMaxDim) +
                      " surviving coordinates");
  const Eigen::Index pos = active.position(j);
  const VectorXd xs = active.gather(x);
  const MatrixXd null_cov = active.surviving_sigma();
  MatrixXd alt_cov = null_cov;
  alt_cov(pos, pos) += params.v;
  return log_prior_odds(params.p) + gaussian_log_density(xs, alt_cov) -
         gaussian_log_density(xs, null_cov);
}

double bsd_stat_via_mrd(const MixtureParams& params, double u, double sigma_cond) {
  if (!(sigma_cond > 0.0)) throw NumericError("bsd_stat_via_mrd: conditional variance must be positive");
  const double v = params.v;
  return log_prior_odds(params.p) + 0.5 * std::log(sigma_cond / (v + sigma_cond)) +
         v * u * u / (2.0 * (v + sigma_cond));
}

StepDownResult bsd_step_down(const VectorXd& x, const MatrixXd& sigma, const MixtureParams& params) {
  return bsd_step_down(x, ActiveSet(sigma), params);
}

StepDownResult bsd_step_down(const VectorXd& x, ActiveSet active, const MixtureParams& params) {
  params.validate();
  const Eigen::Index m = active.dim();
  if (x.size() != m) throw DomainError("bsd_step_down: x and sigma dimensions differ");
  if (!active.removed().empty()) throw DomainError("bsd_step_down: active set must start full");
  StepDownResult result;
  result.decisions.assign(static_cast<std::size_t>(m), false);
  result.trace.stop_stage = m + 1;
  const double threshold = log_threshold(params.delta);

  for (Eigen::Index t = 1; t <= m; ++t) {
    const VectorXd stats = bsd_stats_fast(active, x, params);
    const auto surviving = active.surviving();
    Eigen::Index best_pos = 0;
    for (Eigen::Index k = 1; k < stats.size(); ++k)
      if (better(stats(k), surviving[k], stats(best_pos), surviving[best_pos])) best_pos = k;
    const Eigen::Index chosen = surviving[best_pos];
    const bool reject = stats(best_pos) > threshold;
    result.trace.stages.push_back({t, chosen, stats(best_pos), reject});
    if (!reject) {
      result.trace.stop_stage = t;
      break;
    }
    result.decisions[static_cast<std::size_t>(chosen)] = true;
    active.remove(chosen);
  }
  return result;
}

StepDownResult bsd_step_down_intraclass(const VectorXd& x, double rho, const MixtureParams& params) {
  params.validate();
  const Eigen::Index m = x.size();
  if (m < 1) throw DomainError("bsd_step_down_intraclass: empty data");
  intraclass_inverse_entries(m, rho);  // range check at full dimension
  StepDownResult result;
  result.decisions.assign(static_cast<std::size_t>(m), false);
  result.trace.stop_stage = m + 1;
  const double threshold = log_threshold(params.delta);
  const double lpo = log_prior_odds(params.p);

  std::vector<Eigen::Index> surviving(static_cast<std::size_t>(m));
  std::iota(surviving.begin(), surviving.end(), Eigen::Index{0});
  double total = x.sum();

  for (Eigen::Index t = 1; t <= m; ++t) {
    const auto k = static_cast<Eigen::Index>(surviving.size());
    const auto inv = intraclass_inverse_entries(k, rho);
    // w_j = diag x_j + offdiag (total - x_j); every b_jj equals diag, so the
    // statistic is increasing in w_j^2.
    const double slope = inv.diag - inv.offdiag;
    const double shift = inv.offdiag * total;
    std::size_t best = 0;
    double best_w2 = -1.0;
    for (std::size_t s = 0; s < surviving.size(); ++s) {
      const double w = slope * x(surviving[s]) + shift;
      const double w2 = w * w;
      if (better(w2, surviving[s], best_w2, best_w2 < 0 ? std::numeric_limits<Eigen::Index>::max()
                                                        : surviving[best]))
        best = s, best_w2 = w2;
    }
    const Eigen::Index chosen = surviving[best];
    const double stat = fast_formula(lpo, params.v, inv.diag, std::sqrt(best_w2));
    const bool reject = stat > threshold;
    result.trace.stages.push_back({t, chosen, stat, reject});
    if (!reject) {
      result.trace.stop_stage = t;
      break;
    }
    result.decisions[static_cast<std::size_t>(chosen)] = true;
    total -= x(chosen);
    surviving[best] = surviving.back();
    surviving.pop_back();
  }
  return result;
}

}  // namespace bsdtest
