#include "bsdtest/covariance.hpp"

#include <cmath>
#include <fstream>
#include <string>

namespace bsdtest {

std::string_view to_string(CovarianceKind kind) {
  switch (kind) {
    case CovarianceKind::identity: return "identity";
    case CovarianceKind::intraclass: return "intraclass";
    case CovarianceKind::ar1: return "ar1";
    case CovarianceKind::block: return "block";
    case CovarianceKind::custom: return "custom";
  }
  return "?";
}

CovarianceKind parse_covariance_kind(std::string_view name) {
  for (auto k : {CovarianceKind::identity, CovarianceKind::intraclass, CovarianceKind::ar1,
                 CovarianceKind::block, CovarianceKind::custom})
    if (to_string(k) == name) return k;
  throw ConfigError("cov: unknown covariance family '" + std::string(name) + "'");
}

CovarianceFamily CovarianceFamily::identity(Eigen::Index m) {
  CovarianceFamily f;
  f.kind = CovarianceKind::identity;
  f.dim = m;
  return f;
}

CovarianceFamily CovarianceFamily::intraclass(Eigen::Index m, double rho) {
  CovarianceFamily f;
  f.kind = CovarianceKind::intraclass;
  f.dim = m;
  f.rho = rho;
  return f;
}

CovarianceFamily CovarianceFamily::ar1(Eigen::Index m, double rho) {
  CovarianceFamily f;
  f.kind = CovarianceKind::ar1;
  f.dim = m;
  f.rho = rho;
  return f;
}

CovarianceFamily CovarianceFamily::block(Eigen::Index m, Eigen::Index block_size, double rho) {
  CovarianceFamily f;
  f.kind = CovarianceKind::block;
  f.dim = m;
  f.rho = rho;
  f.block_size = block_size;
  return f;
}

CovarianceFamily CovarianceFamily::from_covariance(const MatrixXd& covariance) {
  if (!is_symmetric(covariance))
    throw DomainError("custom covariance: matrix is not symmetric");
  CovarianceFamily f;
  f.kind = CovarianceKind::custom;
  f.dim = covariance.rows();
  f.custom = to_correlation(covariance);
  checked_cholesky(f.custom);
  return f;
}

CovarianceFamily CovarianceFamily::from_file(const std::string& path) {
  return from_covariance(read_matrix_file(path));
}

namespace {

void check_intraclass_rho(Eigen::Index k, double rho, const char* what) {
  const double lower = k > 1 ? -1.0 / static_cast<double>(k - 1) : -INFINITY;
  if (!(rho > lower && rho < 1.0))
    throw DomainError(std::string(what) + ": rho = " + std::to_string(rho) +
                      " outside the positive-definite range (" + std::to_string(lower) + ", 1)");
}

}  // namespace

void CovarianceFamily::validate() const {
  if (dim < 1) throw DomainError("covariance family: dimension must be >= 1");
  switch (kind) {
    case CovarianceKind::identity: break;
    case CovarianceKind::intraclass: check_intraclass_rho(dim, rho, "intraclass"); break;
    case CovarianceKind::ar1:
      if (!(std::abs(rho) < 1.0)) throw DomainError("ar1: |rho| must be < 1");
      break;
    case CovarianceKind::block:
      if (block_size < 1) throw DomainError("block: block size must be >= 1");
      check_intraclass_rho(std::min(block_size, dim), rho, "block");
      break;
    case CovarianceKind::custom:
      if (custom.rows() != dim || custom.cols() != dim)
        throw DomainError("custom: matrix dimension does not match m");
      break;
  }
}

double CovarianceFamily::correlation(Eigen::Index i, Eigen::Index j) const {
  if (i == j) return 1.0;
  switch (kind) {
    case CovarianceKind::identity: return 0.0;
    case CovarianceKind::intraclass: return rho;
    case CovarianceKind::ar1: return std::pow(rho, static_cast<double>(std::abs(i - j)));
    case CovarianceKind::block: return i / block_size == j / block_size ? rho : 0.0;
    case CovarianceKind::custom: return custom(i, j);
  }
  return 0.0;
}

MatrixXd build_covariance(const CovarianceFamily& family) {
  family.validate();
  if (family.kind == CovarianceKind::custom) return family.custom;
  const Eigen::Index m = family.dim;
  MatrixXd s(m, m);
  for (Eigen::Index j = 0; j < m; ++j)
    for (Eigen::Index i = 0; i < m; ++i) s(i, j) = family.correlation(i, j);
  return s;
}

MatrixXd read_matrix_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open matrix file '" + path + "'");
  try {
    return read_dense_matrix<double>(in);
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.what());
  }
}

VectorXd read_vector_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open vector file '" + path + "'");
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
    if (used != token.size()) throw ParseError(path + ": not a number: '" + token + "'");
    values.push_back(v);
  }
  if (values.empty()) throw ParseError(path + ": empty vector");
  return Eigen::Map<const VectorXd>(values.data(), static_cast<Eigen::Index>(values.size()));
}

}  // namespace bsdtest
