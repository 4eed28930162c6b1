#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace pxp {

// Computational basis pattern: site j is bit j-1 (site 1 is the least significant bit).
using Pattern = std::uint32_t;
using Index = std::uint32_t;

inline constexpr int kMaxSites = 30;
inline constexpr int kMaxFibonacci = 92;

/// n-th Fibonacci number with F(1) = F(2) = 1. Throws RangeError outside [1, 92].
std::uint64_t fib(int n);

/// True when no two adjacent bits of `s` are set.
constexpr bool is_blockaded(Pattern s) noexcept { return (s & (s >> 1)) == 0; }

/// Blockade-constrained basis of an open chain of L sites, in ascending pattern order.
///
/// Patterns are ranked combinatorially: the ordinal of an allowed pattern is the
/// sum of fib(k + 2) over its set bits k (Zeckendorf ranking), so lookups do not
/// need a hash table.
class BlockadedBasis {
 public:
  explicit BlockadedBasis(int sites);

  int sites() const noexcept { return sites_; }
  std::size_t size() const noexcept { return states_.size(); }
  std::span<const Pattern> states() const noexcept { return states_; }
  Pattern operator[](std::size_t i) const noexcept { return states_[i]; }

  /// Ordinal of `s`, or nullopt when `s` is not in the basis.
  std::optional<Index> find(Pattern s) const noexcept;
  /// Ordinal of `s`; throws RangeError when `s` is not in the basis.
  Index index_of(Pattern s) const;

  bool operator==(const BlockadedBasis& other) const noexcept { return sites_ == other.sites_; }

 private:
  int sites_;
  std::vector<Pattern> states_;
};

BlockadedBasis enumerate_basis(int sites);

/// Split of every basis state into a prefix on sites [1, prefix] and a suffix
/// on sites [prefix + 1, L], both expressed as ordinals of their own blockaded bases.
struct BipartitionMap {
  int prefix;
  BlockadedBasis left;
  BlockadedBasis right;
  // pairs[i] = (left ordinal, right ordinal) of global ordinal i.
  std::vector<std::pair<Index, Index>> pairs;
};

BipartitionMap bipartition(const BlockadedBasis& basis, int prefix);

/// Per-site list of basis ordinal pairs (lo, hi) where `hi` is `lo` with site j
/// excited. These are exactly the transitions the PXP term at site j can make.
class SiteFlipTable {
 public:
  explicit SiteFlipTable(const BlockadedBasis& basis);

  int sites() const noexcept { return static_cast<int>(flips_.size()); }
  /// Site index is 1-based.
  std::span<const std::pair<Index, Index>> site(int j) const { return flips_.at(static_cast<std::size_t>(j - 1)); }
  std::size_t total() const noexcept;

 private:
  std::vector<std::vector<std::pair<Index, Index>>> flips_;
};

}  // namespace pxp
