#pragma once

#include <Eigen/Core>
#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <limits>
#include <complex>
#include <vector>

#include "pxp/errors.hpp"

namespace pxp {

/// Incremental Lanczos tridiagonalization with full reorthogonalization.
///
/// `Op` is any Hermitian operator providing `apply(in, out)` (e.g. PxpHamiltonian).
/// The basis is stored column-wise; every new vector is orthogonalized twice against
/// all previous ones (classical Gram-Schmidt, two passes), which keeps the basis
/// orthonormal to machine precision and suppresses spurious Ritz copies.
template <typename Scalar, typename Op>
class Lanczos {
 public:
  using RealScalar = typename Eigen::NumTraits<Scalar>::Real;
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  using Basis = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  using RealMatrix = Eigen::Matrix<RealScalar, Eigen::Dynamic, Eigen::Dynamic>;

  Lanczos(const Op& op, Eigen::Index max_dim) : op_(op), max_dim_(max_dim) {}

  /// Resets the recursion with the normalized start vector v / |v|; returns |v|.
  template <typename Derived>
  RealScalar start(const Eigen::MatrixBase<Derived>& v) {
    const RealScalar norm = v.norm();
    if (!(norm > RealScalar(0))) throw NumericalError("Lanczos: zero start vector");
    const Eigen::Index dim = v.rows();
    const Eigen::Index cols = std::min(max_dim_, dim) + 1;
    if (basis_.rows() != dim || basis_.cols() != cols) basis_.resize(dim, cols);
    basis_.col(0) = v / norm;
    alpha_.clear();
    beta_.clear();
    invariant_ = false;
    return norm;
  }

  /// Adds one Lanczos vector. Returns false when the Krylov space became invariant
  /// (the residual vanished) or the maximal dimension was reached.
  bool extend() {
    if (invariant_ || static_cast<Eigen::Index>(alpha_.size()) >= std::min(max_dim_, basis_.rows())) return false;
    const Eigen::Index j = static_cast<Eigen::Index>(alpha_.size());
    auto w = basis_.col(j + 1);
    op_.apply(basis_.col(j), w);
    const RealScalar a = std::real(basis_.col(j).dot(w));
    alpha_.push_back(a);
    for (int pass = 0; pass < 2; ++pass) {
      const Vector coeffs = basis_.leftCols(j + 1).adjoint() * w;
      w.noalias() -= basis_.leftCols(j + 1) * coeffs;
    }
    const RealScalar b = w.norm();
    beta_.push_back(b);
    // Relative breakdown threshold: the new direction is numerically inside the span.
    const RealScalar scale = std::abs(a) + (j > 0 ? beta_[static_cast<std::size_t>(j - 1)] : RealScalar(0)) + b;
    if (b <= std::numeric_limits<RealScalar>::epsilon() * RealScalar(64) * std::max(scale, RealScalar(1))) {
      invariant_ = true;
      return false;
    }
    w /= b;
    return true;
  }

  /// Number of tridiagonal steps completed (dimension of T).
  Eigen::Index steps() const noexcept { return static_cast<Eigen::Index>(alpha_.size()); }
  bool invariant() const noexcept { return invariant_; }
  /// Coupling from the last Krylov vector to the next (zero when invariant).
  RealScalar residual_beta() const noexcept { return invariant_ || beta_.empty() ? RealScalar(0) : beta_.back(); }

  /// The steps() x steps() tridiagonal projection.
  RealMatrix tridiagonal() const {
    const Eigen::Index k = steps();
    RealMatrix t = RealMatrix::Zero(k, k);
    for (Eigen::Index i = 0; i < k; ++i) {
      t(i, i) = alpha_[static_cast<std::size_t>(i)];
      if (i + 1 < k) t(i, i + 1) = t(i + 1, i) = beta_[static_cast<std::size_t>(i)];
    }
    return t;
  }

  /// First steps() basis vectors.
  auto basis() const { return basis_.leftCols(steps()); }

 private:
  const Op& op_;
  Eigen::Index max_dim_;
  Basis basis_;
  std::vector<RealScalar> alpha_;
  std::vector<RealScalar> beta_;
  bool invariant_ = false;
};

}  // namespace pxp
