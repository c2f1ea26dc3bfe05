#include "bsdtest/baselines.hpp"

#include <algorithm>
#include <numeric>

#include "bsdtest/errors.hpp"
#include "bsdtest/normal.hpp"

namespace bsdtest {

std::vector<double> two_sided_pvalues(const VectorXd& x) {
  std::vector<double> pv(static_cast<std::size_t>(x.size()));
  for (Eigen::Index i = 0; i < x.size(); ++i) pv[static_cast<std::size_t>(i)] = two_sided_pvalue(x(i));
  return pv;
}

DecisionVector bonferroni(const std::vector<double>& pv, double alpha) {
  const double cut = alpha / static_cast<double>(pv.size());
  DecisionVector d(pv.size());
  for (std::size_t i = 0; i < pv.size(); ++i) d[i] = pv[i] <= cut;
  return d;
}

namespace {

// Step-up with thresholds k * level / m.
DecisionVector step_up(const std::vector<double>& pv, double level) {
  const std::size_t m = pv.size();
  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return pv[a] < pv[b]; });
  std::size_t k_star = 0;
  for (std::size_t k = 1; k <= m; ++k)
    if (pv[order[k - 1]] <= static_cast<double>(k) * level / static_cast<double>(m)) k_star = k;
  DecisionVector d(m, false);
  for (std::size_t k = 0; k < k_star; ++k) d[order[k]] = true;
  return d;
}

}  // namespace

DecisionVector bh_step_up(const std::vector<double>& pv, double alpha) { return step_up(pv, alpha); }

DecisionVector by_step_up(const std::vector<double>& pv, double alpha) {
  double harmonic = 0.0;
  for (std::size_t i = pv.size(); i >= 1; --i) harmonic += 1.0 / static_cast<double>(i);
  return step_up(pv, alpha / harmonic);
}

DecisionVector adaptive_bh(const std::vector<double>& pv, double alpha, double p_hat) {
  if (!(p_hat >= 0.0 && p_hat < 1.0)) throw DomainError("adaptive_bh: p_hat must lie in [0, 1)");
  return step_up(pv, alpha / (1.0 - p_hat));
}

}  // namespace bsdtest
