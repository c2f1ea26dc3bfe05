#pragma once

namespace bsdtest {

/// Standard normal CDF, via std::erfc (full double precision in both tails).
double normal_cdf(double z);

/// Upper tail 1 - Phi(z) without cancellation.
double normal_sf(double z);

/// Two-sided p-value 2 * Phi(-|z|).
double two_sided_pvalue(double z);

/// Phi^{-1}(prob) for prob in (0, 1): rational initial guess refined by
/// Halley steps on the erfc-based CDF.
double normal_quantile(double prob);

}  // namespace bsdtest
