#pragma once

#include <vector>

#include "bsdtest/linalg.hpp"
#include "bsdtest/step_down.hpp"

namespace bsdtest {

/// p_i = 2 Phi(-|x_i|).
std::vector<double> two_sided_pvalues(const VectorXd& x);

DecisionVector bonferroni(const std::vector<double>& pv, double alpha);

/// Benjamini-Hochberg step-up: reject the k* smallest p-values where
/// k* = max{k : p_(k) <= k alpha / m}.
DecisionVector bh_step_up(const std::vector<double>& pv, double alpha);

/// Benjamini-Yekutieli: BH at level alpha / H_m.
DecisionVector by_step_up(const std::vector<double>& pv, double alpha);

/// BH with thresholds k alpha / (m (1 - p_hat)).
DecisionVector adaptive_bh(const std::vector<double>& pv, double alpha, double p_hat);

}  // namespace bsdtest
