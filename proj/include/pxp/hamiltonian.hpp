#pragma once

#include <Eigen/Core>
#include <algorithm>
#include <bit>
#include <cmath>
#include <cstddef>
#include <ostream>
#include <string>
#include <vector>

#include "pxp/basis.hpp"
#include "pxp/errors.hpp"

namespace pxp {

inline constexpr std::size_t kDefaultDenseLimit = 7000;

/// PXP Hamiltonian on an open chain restricted to the blockaded basis,
///
///   H = c (X_1 P_2 + sum_{j=2}^{L-1} P_{j-1} X_j P_{j+1} + P_{L-1} X_L) + detuning * sum_j n_j,
///
/// where c = Omega/2. Every off-diagonal element equals c, so only the connectivity
/// is stored (CSR without values). The diagonal is detuning * popcount(s).
template <typename Real = double>
class PxpHamiltonian {
 public:
  using RealScalar = Real;

  PxpHamiltonian(const BlockadedBasis& basis, Real coupling, Real detuning)
      : coupling_(coupling), detuning_(detuning), diagonal_(basis.size(), Real(0)) {
    if (!std::isfinite(static_cast<double>(coupling)) || coupling == Real(0)) {
      throw DomainError("build_pxp: coupling must be finite and nonzero");
    }
    if (!std::isfinite(static_cast<double>(detuning))) throw DomainError("build_pxp: detuning must be finite");
    const SiteFlipTable flips(basis);
    std::vector<std::size_t> degree(basis.size(), 0);
    for (int j = 1; j <= flips.sites(); ++j) {
      for (auto [lo, hi] : flips.site(j)) {
        ++degree[lo];
        ++degree[hi];
      }
    }
    offsets_.assign(basis.size() + 1, 0);
    for (std::size_t i = 0; i < basis.size(); ++i) offsets_[i + 1] = offsets_[i] + degree[i];
    columns_.resize(offsets_.back());
    std::vector<std::size_t> fill(offsets_.begin(), offsets_.end() - 1);
    for (int j = 1; j <= flips.sites(); ++j) {
      for (auto [lo, hi] : flips.site(j)) {
        columns_[fill[lo]++] = hi;
        columns_[fill[hi]++] = lo;
      }
    }
    for (std::size_t i = 0; i < basis.size(); ++i) {
      auto first = columns_.begin() + static_cast<std::ptrdiff_t>(offsets_[i]);
      auto last = columns_.begin() + static_cast<std::ptrdiff_t>(offsets_[i + 1]);
      std::sort(first, last);
      diagonal_[i] = detuning * static_cast<Real>(std::popcount(basis[i]));
    }
  }

  std::size_t dim() const noexcept { return diagonal_.size(); }
  Real coupling() const noexcept { return coupling_; }
  Real detuning() const noexcept { return detuning_; }
  /// Number of stored off-diagonal entries (both triangles).
  std::size_t nnz() const noexcept { return columns_.size(); }
  Real diagonal(std::size_t i) const { return diagonal_[i]; }
  std::span<const Index> neighbors(std::size_t i) const {
    return {columns_.data() + offsets_[i], offsets_[i + 1] - offsets_[i]};
  }

  /// out = H * v. `out` must not alias `v`; it may be a block expression.
  template <typename In, typename Out>
  void apply(const Eigen::MatrixBase<In>& v, const Eigen::MatrixBase<Out>& out_) const {
    check_dim(v.rows());
    auto& out = const_cast<Eigen::MatrixBase<Out>&>(out_);
    out.derived().resize(v.rows(), v.cols());
    for (Eigen::Index col = 0; col < v.cols(); ++col) {
      for (std::size_t i = 0; i < dim(); ++i) {
        typename In::Scalar acc(0);
        for (std::size_t k = offsets_[i]; k < offsets_[i + 1]; ++k) acc += v(columns_[k], col);
        out(static_cast<Eigen::Index>(i), col) =
            coupling_ * acc + diagonal_[i] * v(static_cast<Eigen::Index>(i), col);
      }
    }
  }

  template <typename In>
  Eigen::Matrix<typename In::Scalar, Eigen::Dynamic, In::ColsAtCompileTime> operator*(
      const Eigen::MatrixBase<In>& v) const {
    Eigen::Matrix<typename In::Scalar, Eigen::Dynamic, In::ColsAtCompileTime> out(v.rows(), v.cols());
    apply(v, out);
    return out;
  }

  Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic> to_dense(std::size_t limit = kDefaultDenseLimit) const {
    if (dim() > limit) {
      throw CapacityError("dense Hamiltonian of dimension " + std::to_string(dim()) + " exceeds limit " +
                          std::to_string(limit));
    }
    const auto n = static_cast<Eigen::Index>(dim());
    Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic> dense = Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic>::Zero(n, n);
    for (std::size_t i = 0; i < dim(); ++i) {
      dense(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = diagonal_[i];
      for (Index c : neighbors(i)) dense(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c)) = coupling_;
    }
    return dense;
  }

  /// Writes "row col value" triplets (0-based ordinals), diagonal included when nonzero.
  void write_triplets(std::ostream& os) const {
    const auto old_precision = os.precision(17);
    for (std::size_t i = 0; i < dim(); ++i) {
      if (diagonal_[i] != Real(0)) os << i << ' ' << i << ' ' << diagonal_[i] << '\n';
      for (Index c : neighbors(i)) os << i << ' ' << c << ' ' << coupling_ << '\n';
    }
    os.precision(old_precision);
  }

 private:
  void check_dim(Eigen::Index rows) const {
    if (static_cast<std::size_t>(rows) != dim()) {
      throw ShapeError("Hamiltonian of dimension " + std::to_string(dim()) + " applied to vector of length " +
                       std::to_string(rows));
    }
  }

  Real coupling_;
  Real detuning_;
  std::vector<Real> diagonal_;
  std::vector<std::size_t> offsets_;
  std::vector<Index> columns_;
};

template <typename Real = double>
PxpHamiltonian<Real> build_pxp(const BlockadedBasis& basis, Real coupling = Real(1), Real detuning = Real(0)) {
  return PxpHamiltonian<Real>(basis, coupling, detuning);
}

}  // namespace pxp
