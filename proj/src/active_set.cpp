#include "bsdtest/active_set.hpp"

#include <numeric>
#include <string>
#include <utility>

namespace bsdtest {

ActiveSet::ActiveSet(MatrixXd sigma) : sigma_(std::move(sigma)) {
  if (!is_symmetric(sigma_)) throw DomainError("ActiveSet: sigma must be square and symmetric");
  inv_ = spd_inverse(sigma_);
  const auto m = static_cast<std::size_t>(sigma_.rows());
  surviving_.resize(m);
  std::iota(surviving_.begin(), surviving_.end(), Eigen::Index{0});
  position_.assign(surviving_.begin(), surviving_.end());
}

ActiveSet::ActiveSet(MatrixXd sigma, MatrixXd inverse)
    : sigma_(std::move(sigma)), inv_(std::move(inverse)) {
  if (!is_symmetric(sigma_)) throw DomainError("ActiveSet: sigma must be square and symmetric");
  if (inv_.rows() != sigma_.rows() || inv_.cols() != sigma_.cols())
    throw DomainError("ActiveSet: inverse has the wrong shape");
  const auto m = static_cast<std::size_t>(sigma_.rows());
  surviving_.resize(m);
  std::iota(surviving_.begin(), surviving_.end(), Eigen::Index{0});
  position_.assign(surviving_.begin(), surviving_.end());
}

ActiveSet::ActiveSet(MatrixXd sigma, std::span<const Eigen::Index> prefix)
    : ActiveSet(std::move(sigma)) {
  for (auto j : prefix) remove(j);
}

Eigen::Index ActiveSet::position(Eigen::Index j) const {
  if (j < 0 || j >= dim() || position_[static_cast<std::size_t>(j)] < 0)
    throw DomainError("ActiveSet: index " + std::to_string(j) + " is not surviving");
  return position_[static_cast<std::size_t>(j)];
}

VectorXd ActiveSet::gather(const VectorXd& x) const {
  if (x.size() != dim()) throw DomainError("ActiveSet: data vector has wrong length");
  VectorXd out(size());
  for (Eigen::Index k = 0; k < size(); ++k) out(k) = x(surviving_[static_cast<std::size_t>(k)]);
  return out;
}

MatrixXd ActiveSet::surviving_sigma() const { return sigma_(surviving_, surviving_); }

void ActiveSet::remove(Eigen::Index j) {
  const Eigen::Index pos = position(j);
  const Eigen::Index n = size();
  if (n == 1) {
    // Nothing left to invert.
    inv_.resize(0, 0);
  } else {
    inverse_downdate_swap_last(inv_, n, pos);
  }
  const auto last = static_cast<std::size_t>(n - 1);
  const Eigen::Index moved = surviving_[last];
  surviving_[static_cast<std::size_t>(pos)] = moved;
  position_[static_cast<std::size_t>(moved)] = pos;
  surviving_.pop_back();
  position_[static_cast<std::size_t>(j)] = -1;
  removed_.push_back(j);
}

}  // namespace bsdtest
