#pragma once

#include <string>
#include <string_view>

#include "bsdtest/linalg.hpp"

namespace bsdtest {

enum class CovarianceKind { identity, intraclass, ar1, block, custom };

std::string_view to_string(CovarianceKind kind);
CovarianceKind parse_covariance_kind(std::string_view name);

/// A correlation structure for the m test statistics. `custom` carries the
/// user matrix already standardised to a correlation matrix.
struct CovarianceFamily {
  CovarianceKind kind = CovarianceKind::identity;
  Eigen::Index dim = 0;
  double rho = 0.0;
  Eigen::Index block_size = 1;
  MatrixXd custom;

  static CovarianceFamily identity(Eigen::Index m);
  static CovarianceFamily intraclass(Eigen::Index m, double rho);
  static CovarianceFamily ar1(Eigen::Index m, double rho);
  static CovarianceFamily block(Eigen::Index m, Eigen::Index block_size, double rho);
  /// Standardises `covariance` with to_correlation.
  static CovarianceFamily from_covariance(const MatrixXd& covariance);
  static CovarianceFamily from_file(const std::string& path);

  /// Throws DomainError when parameters leave the positive-definite range.
  void validate() const;

  /// Correlation between coordinates i and j without building the matrix.
  double correlation(Eigen::Index i, Eigen::Index j) const;
};

MatrixXd build_covariance(const CovarianceFamily& family);

MatrixXd read_matrix_file(const std::string& path);
VectorXd read_vector_file(const std::string& path);

}  // namespace bsdtest
