#pragma once

#include <iosfwd>
#include <vector>

#include "bsdtest/active_set.hpp"
#include "bsdtest/step_down.hpp"

namespace bsdtest {

/// Non-increasing positive critical constants C_1 >= ... >= C_m > 0.
class CriticalSequence {
public:
  explicit CriticalSequence(std::vector<double> values);

  /// C_t = Phi^{-1}(1 - alpha / (2 (m - t + 1))).
  static CriticalSequence sidak_holm(Eigen::Index m, double alpha);
  /// One positive real per line.
  static CriticalSequence read(std::istream& in);

  Eigen::Index size() const { return static_cast<Eigen::Index>(values_.size()); }
  /// 1-based stage.
  double at_stage(Eigen::Index t) const { return values_.at(static_cast<std::size_t>(t - 1)); }
  const std::vector<double>& values() const { return values_; }

private:
  std::vector<double> values_;
};

struct Residual {
  double u = 0.0;           // standardised regression residual U_tj
  double sigma_cond = 1.0;  // conditional variance sigma_{j.(removed)}
};

/// U_tj from the surviving inverse: sigma_cond = 1 / b_jj and
/// u = (sum_k b_kj x_k) / sqrt(b_jj).
Residual mrd_residual(const ActiveSet& active, Eigen::Index j, const VectorXd& x);

StepDownResult mrd_step_down(const VectorXd& x, const MatrixXd& sigma, const CriticalSequence& c);
StepDownResult mrd_step_down(const VectorXd& x, ActiveSet active, const CriticalSequence& c);

}  // namespace bsdtest
