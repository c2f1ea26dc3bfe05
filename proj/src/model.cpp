#include "bsdtest/model.hpp"

#include <algorithm>
#include <cmath>

namespace bsdtest {

void MixtureParams::validate() const {
  if (!(p > 0.0 && p < 1.0)) throw DomainError("mixture params: p must lie in (0, 1)");
  if (!(v > 0.0)) throw DomainError("mixture params: V must be positive");
  if (!(delta > 0.0)) throw DomainError("mixture params: delta must be positive");
}

DatasetSampler::DatasetSampler(const CovarianceFamily& family, const MixtureParams& params)
    : dim_(family.dim), params_(params), kind_(family.kind) {
  family.validate();
  params.validate();
  switch (kind_) {
    case CovarianceKind::identity: break;
    case CovarianceKind::intraclass: {
      // Symmetric square root of (1 - rho) I + rho J, valid over the whole
      // positive-definite range of rho.
      const double m = static_cast<double>(dim_);
      intraclass_a_ = std::sqrt(1.0 - family.rho);
      intraclass_b_ = (std::sqrt(1.0 + (m - 1.0) * family.rho) - intraclass_a_) / m;
      break;
    }
    case CovarianceKind::ar1:
      // The Cholesky factor of an AR(1) matrix is the recursion
      // x_i = rho x_{i-1} + sqrt(1 - rho^2) z_i, so nothing is stored.
      rho_ = family.rho;
      break;
    case CovarianceKind::block:
      rho_ = family.rho;
      block_size_ = family.block_size;
      break;
    default: {
      auto llt = checked_cholesky(build_covariance(family));
      cholesky_lower_ = MatrixXd(llt.matrixL());
      break;
    }
  }
}

void DatasetSampler::correlated_noise(Engine& engine, VectorXd& out) const {
  std::normal_distribution<double> normal;
  VectorXd z(dim_);
  for (Eigen::Index i = 0; i < dim_; ++i) z(i) = normal(engine);
  switch (kind_) {
    case CovarianceKind::identity: out = std::move(z); break;
    case CovarianceKind::intraclass:
      out = intraclass_a_ * z + VectorXd::Constant(dim_, intraclass_b_ * z.sum());
      break;
    case CovarianceKind::ar1: {
      const double s = std::sqrt(1.0 - rho_ * rho_);
      out.resize(dim_);
      out(0) = z(0);
      for (Eigen::Index i = 1; i < dim_; ++i) out(i) = rho_ * out(i - 1) + s * z(i);
      break;
    }
    case CovarianceKind::block: {
      // Symmetric square root block by block; the last block may be short.
      out.resize(dim_);
      const double a = std::sqrt(1.0 - rho_);
      for (Eigen::Index start = 0; start < dim_; start += block_size_) {
        const Eigen::Index len = std::min(block_size_, dim_ - start);
        const double k = static_cast<double>(len);
        const double b = (std::sqrt(1.0 + (k - 1.0) * rho_) - a) / k;
        const double shared = b * z.segment(start, len).sum();
        out.segment(start, len) = (a * z.segment(start, len)).array() + shared;
      }
      break;
    }
    default:
      out.noalias() = cholesky_lower_->triangularView<Eigen::Lower>() * z;
      break;
  }
}

Dataset DatasetSampler::sample(Engine& engine) const {
  Dataset d;
  d.truth.nu.resize(dim_);
  d.truth.mu = VectorXd::Zero(dim_);
  std::bernoulli_distribution coin(params_.p);
  for (Eigen::Index i = 0; i < dim_; ++i) d.truth.nu(i) = coin(engine) ? 1 : 0;
  std::normal_distribution<double> slab(0.0, std::sqrt(params_.v));
  for (Eigen::Index i = 0; i < dim_; ++i)
    if (d.truth.nu(i) == 1) d.truth.mu(i) = slab(engine);
  correlated_noise(engine, d.x);
  d.x += d.truth.mu;
  return d;
}

Dataset sample_dataset(const CovarianceFamily& family, const MixtureParams& params,
                       std::uint64_t seed) {
  return DatasetSampler(family, params).sample(seed, 0);
}

}  // namespace bsdtest
