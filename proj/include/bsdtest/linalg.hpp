#pragma once

// Dense symmetric kernels used by the step-down procedures: Cholesky-based
// inversion with definiteness detection, rank-one inverse updates, determinant
// ratios, single-column block inversion, principal-submatrix downdating and
// the closed-form intraclass inverse.
//
// Indices are zero-based throughout.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <istream>
#include <limits>
#include <ostream>
#include <string>
#include <vector>

#include "bsdtest/errors.hpp"

namespace bsdtest {

template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using MatrixXd = Matrix<double>;
using VectorXd = Vector<double>;

/// Absolute tolerance used to accept a matrix as symmetric.
inline constexpr double kSymmetryTolerance = 1e-12;
/// A Cholesky pivot below this fraction of the largest diagonal entry marks
/// the input as not positive definite.
inline constexpr double kPivotTolerance = 1e-12;

template <typename Derived>
bool is_symmetric(const Eigen::MatrixBase<Derived>& m,
                  typename Derived::Scalar tol = kSymmetryTolerance) {
  if (m.rows() != m.cols()) return false;
  for (Eigen::Index j = 0; j < m.cols(); ++j)
    for (Eigen::Index i = j + 1; i < m.rows(); ++i)
      if (std::abs(m(i, j) - m(j, i)) > tol) return false;
  return true;
}

/// Cholesky factorisation that rejects non-PD input. The pivots are the
/// squared diagonal entries of L.
template <typename Scalar>
Eigen::LLT<Matrix<Scalar>> checked_cholesky(const Matrix<Scalar>& m) {
  if (m.rows() != m.cols() || m.rows() == 0)
    throw DomainError("checked_cholesky: matrix must be square and non-empty");
  Eigen::LLT<Matrix<Scalar>> llt(m);
  if (llt.info() != Eigen::Success)
    throw NumericError("checked_cholesky: matrix is not positive definite");
  const Scalar max_diag = m.diagonal().maxCoeff();
  const auto diag = llt.matrixLLT().diagonal();
  for (Eigen::Index i = 0; i < diag.size(); ++i) {
    const Scalar pivot = diag(i) * diag(i);
    if (!(pivot >= Scalar(kPivotTolerance) * max_diag))
      throw NumericError("checked_cholesky: pivot " + std::to_string(i) +
                         " below tolerance; matrix is not positive definite");
  }
  return llt;
}

template <typename Scalar>
Matrix<Scalar> spd_inverse(const Matrix<Scalar>& m) {
  auto llt = checked_cholesky(m);
  Matrix<Scalar> inv = llt.solve(Matrix<Scalar>::Identity(m.rows(), m.cols()));
  // Restore exact symmetry lost to rounding in the two triangular solves.
  return (inv + inv.transpose()) / Scalar(2);
}

template <typename Scalar>
Scalar spd_log_det(const Matrix<Scalar>& m) {
  auto llt = checked_cholesky(m);
  return Scalar(2) * llt.matrixLLT().diagonal().array().log().sum();
}

/// Log density of N(0, cov) at x.
template <typename Scalar>
Scalar gaussian_log_density(const Vector<Scalar>& x, const Matrix<Scalar>& cov) {
  auto llt = checked_cholesky(cov);
  const Vector<Scalar> z = llt.matrixL().solve(x);
  const Scalar log_det = Scalar(2) * llt.matrixLLT().diagonal().array().log().sum();
  const Scalar log_2pi = std::log(Scalar(2) * Scalar(EIGEN_PI));
  return Scalar(-0.5) * (z.squaredNorm() + log_det + Scalar(x.size()) * log_2pi);
}

/// D^{-1/2} S D^{-1/2}; the diagonal of the result is exactly one.
template <typename Scalar>
Matrix<Scalar> to_correlation(const Matrix<Scalar>& s) {
  if (s.rows() != s.cols())
    throw DomainError("to_correlation: matrix must be square");
  const Eigen::Index m = s.rows();
  Vector<Scalar> inv_sd(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    if (!(s(i, i) > Scalar(0)))
      throw DomainError("to_correlation: non-positive diagonal entry at " +
                        std::to_string(i));
    inv_sd(i) = Scalar(1) / std::sqrt(s(i, i));
  }
  Matrix<Scalar> r = inv_sd.asDiagonal() * s * inv_sd.asDiagonal();
  r.diagonal().setOnes();
  return r;
}

/// Sherman-Morrison step: given Binv = (Sigma + V B_{nu_i=0})^{-1}, returns
/// (Sigma + V B_{nu_i=1})^{-1}.
template <typename Scalar>
Matrix<Scalar> rank_one_inverse_update(const Matrix<Scalar>& binv, Eigen::Index i,
                                       Scalar v) {
  const Scalar denom = Scalar(1) + v * binv(i, i);
  if (!(denom > Scalar(0)))
    throw NumericError("rank_one_inverse_update: 1 + V*b_ii must be positive");
  const Vector<Scalar> b = binv.col(i);
  Matrix<Scalar> out = binv;
  out.noalias() -= (v / denom) * (b * b.transpose());
  return out;
}

/// |Sigma + V B_{nu_i=1}| / |Sigma + V B_{nu_i=0}| = 1 + V b_ii.
template <typename Scalar>
Scalar determinant_ratio(const Matrix<Scalar>& binv, Eigen::Index i, Scalar v) {
  return Scalar(1) + v * binv(i, i);
}

template <typename Scalar>
struct InverseColumn {
  Eigen::Index index = 0;
  Vector<Scalar> column;  // column `index` of M^{-1}

  Scalar diagonal() const { return column(index); }
};

namespace detail {

inline std::vector<Eigen::Index> all_but(Eigen::Index n, Eigen::Index skip) {
  std::vector<Eigen::Index> idx;
  idx.reserve(static_cast<std::size_t>(n > 0 ? n - 1 : 0));
  for (Eigen::Index k = 0; k < n; ++k)
    if (k != skip) idx.push_back(k);
  return idx;
}

}  // namespace detail

/// Column i of M^{-1} from a single solve against M with row and column i
/// removed (Schur complement form).
template <typename Scalar>
InverseColumn<Scalar> block_inverse_entries(const Matrix<Scalar>& m, Eigen::Index i) {
  const Eigen::Index n = m.rows();
  if (m.cols() != n || i < 0 || i >= n)
    throw DomainError("block_inverse_entries: bad dimensions or index");
  InverseColumn<Scalar> out;
  out.index = i;
  out.column = Vector<Scalar>::Zero(n);
  if (n == 1) {
    if (!(m(0, 0) > Scalar(0)))
      throw NumericError("block_inverse_entries: Schur complement is not positive");
    out.column(0) = Scalar(1) / m(0, 0);
    return out;
  }
  const auto rest = detail::all_but(n, i);
  const Matrix<Scalar> sub = m(rest, rest);
  const Vector<Scalar> sigma = m(rest, i);
  const Vector<Scalar> solved = checked_cholesky(sub).solve(sigma);
  const Scalar schur = m(i, i) - sigma.dot(solved);
  if (!(schur > Scalar(0)))
    throw NumericError("block_inverse_entries: Schur complement is not positive");
  const Scalar bii = Scalar(1) / schur;
  out.column(i) = bii;
  for (std::size_t k = 0; k < rest.size(); ++k)
    out.column(rest[k]) = -bii * solved(static_cast<Eigen::Index>(k));
  return out;
}

/// Given Ainv = A^{-1}, returns the inverse of A with row and column k
/// deleted, in O(n^2).
template <typename Scalar>
Matrix<Scalar> inverse_downdate(const Matrix<Scalar>& ainv, Eigen::Index k) {
  const Eigen::Index n = ainv.rows();
  if (ainv.cols() != n || n < 2 || k < 0 || k >= n)
    throw DomainError("inverse_downdate: need a square matrix of dim >= 2 and a valid index");
  const Scalar d = ainv(k, k);
  if (!(d > Scalar(0)))
    throw NumericError("inverse_downdate: diagonal entry is not positive");
  const auto rest = detail::all_but(n, k);
  const Vector<Scalar> c = ainv(rest, k);
  Matrix<Scalar> out = ainv(rest, rest);
  out.noalias() -= (c * c.transpose()) / d;
  return out;
}

/// In-place variant: deletes row/column k by moving the last row/column into
/// its slot, so the caller's position map must swap k and n-1. On return the
/// top-left (n-1)x(n-1) block of `ainv` holds the downdated inverse.
template <typename Scalar>
void inverse_downdate_swap_last(Matrix<Scalar>& ainv, Eigen::Index n, Eigen::Index k) {
  if (n < 2 || k < 0 || k >= n)
    throw DomainError("inverse_downdate: need dim >= 2 and a valid index");
  const Eigen::Index last = n - 1;
  if (k != last) {
    ainv.row(k).head(n).swap(ainv.row(last).head(n));
    ainv.col(k).head(n).swap(ainv.col(last).head(n));
  }
  const Scalar d = ainv(last, last);
  if (!(d > Scalar(0)))
    throw NumericError("inverse_downdate: diagonal entry is not positive");
  const Vector<Scalar> c = ainv.col(last).head(last);
  ainv.topLeftCorner(last, last).noalias() -= (c * c.transpose()) / d;
}

template <typename Scalar>
struct IntraclassInverse {
  Scalar diag;
  Scalar offdiag;
};

/// Entries of ((1-rho) I + rho J)^{-1} for a k x k intraclass matrix.
template <typename Scalar>
IntraclassInverse<Scalar> intraclass_inverse_entries(Eigen::Index k, Scalar rho) {
  if (k < 1) throw DomainError("intraclass_inverse_entries: dimension must be >= 1");
  const Scalar lower = k > 1 ? Scalar(-1) / Scalar(k - 1) : -std::numeric_limits<Scalar>::infinity();
  if (!(rho > lower && rho < Scalar(1)))
    throw DomainError("intraclass_inverse_entries: rho outside the positive-definite range");
  const Scalar denom = (Scalar(1) - rho) * (Scalar(1) + Scalar(k - 1) * rho);
  return {(Scalar(1) + Scalar(k - 2) * rho) / denom, -rho / denom};
}

/// Reads the dense text format: first token m, then m*m reals row by row.
template <typename Scalar>
Matrix<Scalar> read_dense_matrix(std::istream& in) {
  long long m = 0;
  if (!(in >> m) || m <= 0) throw ParseError("dense matrix: expected a positive dimension");
  Matrix<Scalar> out(m, m);
  for (Eigen::Index i = 0; i < m; ++i)
    for (Eigen::Index j = 0; j < m; ++j)
      if (!(in >> out(i, j)))
        throw ParseError("dense matrix: expected " + std::to_string(m * m) +
                         " entries, stopped at row " + std::to_string(i + 1) +
                         " column " + std::to_string(j + 1));
  std::string trailing;
  if (in >> trailing) throw ParseError("dense matrix: unexpected trailing token '" + trailing + "'");
  return out;
}

template <typename Scalar>
void write_dense_matrix(std::ostream& out, const Matrix<Scalar>& m) {
  const auto old = out.precision(17);
  out << m.rows() << '\n';
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) out << (j ? " " : "") << m(i, j);
    out << '\n';
  }
  out.precision(old);
}

}  // namespace bsdtest
