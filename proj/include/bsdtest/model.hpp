#pragma once

#include <cstdint>
#include <optional>

#include "bsdtest/covariance.hpp"
#include "bsdtest/rng.hpp"

namespace bsdtest {

/// Two-groups prior: mu_i = 0 with probability 1 - p, else N(0, v).
/// `delta` is the BSD rejection threshold on the posterior-odds statistic.
struct MixtureParams {
  double p = 0.1;
  double v = 1.0;
  double delta = 1.0;

  void validate() const;
};

struct GroundTruth {
  Eigen::VectorXi nu;  // 1 = non-null
  VectorXd mu;
};

struct Dataset {
  GroundTruth truth;
  VectorXd x;
};

/// Draws datasets from the mixture model. The covariance square root is
/// computed once and shared by every replicate.
class DatasetSampler {
public:
  DatasetSampler(const CovarianceFamily& family, const MixtureParams& params);

  Eigen::Index dim() const { return dim_; }

  Dataset sample(Engine& engine) const;
  Dataset sample(std::uint64_t seed, std::uint64_t replicate) const {
    Engine engine = make_substream(seed, replicate);
    return sample(engine);
  }

  /// x ~ N(0, Sigma) into `out`, consuming dim() normal draws.
  void correlated_noise(Engine& engine, VectorXd& out) const;

private:
  Eigen::Index dim_;
  MixtureParams params_;
  CovarianceKind kind_;
  // intraclass: x = a z + b (1'z) 1
  double intraclass_a_ = 1.0;
  double intraclass_b_ = 0.0;
  // ar1 and block
  double rho_ = 0.0;
  Eigen::Index block_size_ = 1;
  std::optional<MatrixXd> cholesky_lower_;
};

Dataset sample_dataset(const CovarianceFamily& family, const MixtureParams& params,
                       std::uint64_t seed);

}  // namespace bsdtest
