#pragma once

#include <span>
#include <vector>

#include "bsdtest/linalg.hpp"

namespace bsdtest {

/// The hypotheses still under test at some stage of a step-down run,
/// together with the inverse of the correlation submatrix over them.
///
/// Surviving indices are kept in "position order": position(j) is the row of
/// inverse() that belongs to original index j. Removal swaps the removed
/// index with the last position and downdates the inverse in O(k^2).
class ActiveSet {
public:
  /// All m indices surviving; inverts `sigma` by Cholesky.
  explicit ActiveSet(MatrixXd sigma);
  /// Reuses an inverse computed elsewhere (e.g. shared across replicates).
  ActiveSet(MatrixXd sigma, MatrixXd inverse);
  /// Starts from `sigma` and removes `prefix` in order.
  ActiveSet(MatrixXd sigma, std::span<const Eigen::Index> prefix);

  Eigen::Index dim() const { return sigma_.rows(); }
  Eigen::Index size() const { return static_cast<Eigen::Index>(surviving_.size()); }
  bool empty() const { return surviving_.empty(); }

  std::span<const Eigen::Index> removed() const { return removed_; }
  std::span<const Eigen::Index> surviving() const { return surviving_; }
  bool is_surviving(Eigen::Index j) const { return position_.at(static_cast<std::size_t>(j)) >= 0; }
  /// Row of inverse() holding index j; throws if j was removed.
  Eigen::Index position(Eigen::Index j) const;

  const MatrixXd& sigma() const { return sigma_; }
  /// Inverse of sigma restricted to the surviving indices, in position order.
  auto inverse() const { return inv_.topLeftCorner(size(), size()); }
  /// Surviving coordinates of x, in position order.
  VectorXd gather(const VectorXd& x) const;
  /// Surviving rows/columns of sigma, in position order.
  MatrixXd surviving_sigma() const;

  void remove(Eigen::Index j);

private:
  MatrixXd sigma_;
  MatrixXd inv_;
  std::vector<Eigen::Index> surviving_;
  std::vector<Eigen::Index> removed_;
  std::vector<Eigen::Index> position_;
};

}  // namespace bsdtest
