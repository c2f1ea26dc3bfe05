#include "bsdtest/mrd.hpp"

#include <cmath>
#include <istream>
#include <string>

#include "bsdtest/normal.hpp"

namespace bsdtest {

CriticalSequence::CriticalSequence(std::vector<double> values) : values_(std::move(values)) {
  if (values_.empty()) throw DomainError("critical sequence: empty");
  for (std::size_t t = 0; t < values_.size(); ++t) {
    if (!(values_[t] > 0.0))
      throw DomainError("critical sequence: C_" + std::to_string(t + 1) + " must be positive");
    if (t > 0 && values_[t] > values_[t - 1])
      throw DomainError("critical sequence: C_" + std::to_string(t + 1) + " exceeds C_" +
                        std::to_string(t) + "; constants must be non-increasing");
  }
}

CriticalSequence CriticalSequence::sidak_holm(Eigen::Index m, double alpha) {
  if (m < 1) throw DomainError("critical sequence: m must be >= 1");
  if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("critical sequence: alpha must lie in (0, 1)");
  std::vector<double> c(static_cast<std::size_t>(m));
  for (Eigen::Index t = 1; t <= m; ++t)
    c[static_cast<std::size_t>(t - 1)] = -normal_quantile(alpha / (2.0 * static_cast<double>(m - t + 1)));
  return CriticalSequence(std::move(c));
}

CriticalSequence CriticalSequence::read(std::istream& in) {
  std::vector<double> values;
  std::string token;
  while (in >> token) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(token, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != token.size()) throw ParseError("critical sequence: not a number: '" + token + "'");
    values.push_back(v);
  }
  return CriticalSequence(std::move(values));
}

Residual mrd_residual(const ActiveSet& active, Eigen::Index j, const VectorXd& x) {
  const Eigen::Index pos = active.position(j);
  const auto inv = active.inverse();
  const double bjj = inv(pos, pos);
  if (!(bjj > 0.0)) throw NumericError("mrd_residual: conditional variance is not positive");
  const double w = inv.col(pos).dot(active.gather(x));
  return {w / std::sqrt(bjj), 1.0 / bjj};
}

StepDownResult mrd_step_down(const VectorXd& x, const MatrixXd& sigma, const CriticalSequence& c) {
  return mrd_step_down(x, ActiveSet(sigma), c);
}

StepDownResult mrd_step_down(const VectorXd& x, ActiveSet active, const CriticalSequence& c) {
  const Eigen::Index m = active.dim();
  if (!active.removed().empty()) throw DomainError("mrd_step_down: active set must start full");
  if (x.size() != m) throw DomainError("mrd_step_down: x and sigma dimensions differ");
  if (c.size() != m) throw DomainError("mrd_step_down: critical sequence length must equal m");
  StepDownResult result;
  result.decisions.assign(static_cast<std::size_t>(m), false);
  result.trace.stop_stage = m + 1;

  for (Eigen::Index t = 1; t <= m; ++t) {
    const VectorXd xs = active.gather(x);
    const auto inv = active.inverse();
    VectorXd w(xs.size());
    w.noalias() = inv * xs;
    const auto surviving = active.surviving();
    Eigen::Index best_pos = -1;
    double best_abs = 0.0;
    for (Eigen::Index k = 0; k < xs.size(); ++k) {
      const double bkk = inv(k, k);
      if (!(bkk > 0.0)) throw NumericError("mrd_step_down: conditional variance is not positive");
      const double a = std::abs(w(k)) / std::sqrt(bkk);
      if (best_pos < 0 || a > best_abs || (a == best_abs && surviving[k] < surviving[best_pos]))
        best_pos = k, best_abs = a;
    }
    const Eigen::Index chosen = surviving[best_pos];
    const bool reject = best_abs > c.at_stage(t);
    result.trace.stages.push_back({t, chosen, best_abs, reject});
    if (!reject) {
      result.trace.stop_stage = t;
      break;
    }
    result.decisions[static_cast<std::size_t>(chosen)] = true;
    active.remove(chosen);
  }
  return result;
}

}  // namespace bsdtest
