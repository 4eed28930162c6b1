#include "pxp/basis.hpp"

#include <array>
#include <string>

#include "pxp/errors.hpp"

namespace pxp {

namespace {

constexpr auto kFibTable = [] {
  std::array<std::uint64_t, kMaxFibonacci + 1> t{};
  t[1] = t[2] = 1;
  for (int n = 3; n <= kMaxFibonacci; ++n) t[n] = t[n - 1] + t[n - 2];
  return t;
}();

}  // namespace

std::uint64_t fib(int n) {
  if (n < 1 || n > kMaxFibonacci) {
    throw RangeError("fib: n = " + std::to_string(n) + " outside [1, " + std::to_string(kMaxFibonacci) + "]");
  }
  return kFibTable[static_cast<std::size_t>(n)];
}

BlockadedBasis::BlockadedBasis(int sites) : sites_(sites) {
  if (sites < 1 || sites > kMaxSites) {
    throw RangeError("enumerate_basis: L = " + std::to_string(sites) + " outside [1, " + std::to_string(kMaxSites) +
                     "]");
  }
  // B(L) = B(L-1) followed by {top bit | s : s in B(L-2)}; both halves are ascending
  // and every pattern in the second half exceeds every pattern in the first.
  states_.reserve(fib(sites + 2));
  states_.push_back(0);
  states_.push_back(1);
  std::size_t prev_size = 1;  // |B(0)|
  for (int l = 2; l <= sites; ++l) {
    const std::size_t current = states_.size();
    const Pattern top = Pattern{1} << (l - 1);
    for (std::size_t i = 0; i < prev_size; ++i) states_.push_back(top | states_[i]);
    prev_size = current;
  }
}

std::optional<Index> BlockadedBasis::find(Pattern s) const noexcept {
  if (sites_ < 32 && (s >> sites_) != 0) return std::nullopt;
  if (!is_blockaded(s)) return std::nullopt;
  std::uint64_t rank = 0;
  for (int k = 0; k < sites_; ++k) {
    if (s & (Pattern{1} << k)) rank += kFibTable[static_cast<std::size_t>(k + 2)];
  }
  return static_cast<Index>(rank);
}

Index BlockadedBasis::index_of(Pattern s) const {
  if (auto i = find(s)) return *i;
  throw RangeError("pattern " + std::to_string(s) + " is not in the blockaded basis of L = " +
                   std::to_string(sites_));
}

BlockadedBasis enumerate_basis(int sites) { return BlockadedBasis(sites); }

BipartitionMap bipartition(const BlockadedBasis& basis, int prefix) {
  const int L = basis.sites();
  if (prefix < 1 || prefix >= L) {
    throw RangeError("bipartition: prefix " + std::to_string(prefix) + " outside [1, " + std::to_string(L - 1) + "]");
  }
  BipartitionMap map{prefix, BlockadedBasis(prefix), BlockadedBasis(L - prefix), {}};
  map.pairs.reserve(basis.size());
  const Pattern mask = (Pattern{1} << prefix) - 1;
  for (Pattern s : basis.states()) {
    map.pairs.emplace_back(map.left.index_of(s & mask), map.right.index_of(s >> prefix));
  }
  return map;
}

SiteFlipTable::SiteFlipTable(const BlockadedBasis& basis) : flips_(static_cast<std::size_t>(basis.sites())) {
  const int L = basis.sites();
  for (std::size_t i = 0; i < basis.size(); ++i) {
    const Pattern s = basis[i];
    for (int k = 0; k < L; ++k) {
      const Pattern bit = Pattern{1} << k;
      if (s & bit) continue;
      const bool left_free = k == 0 || !(s & (bit >> 1));
      const bool right_free = k == L - 1 || !(s & (bit << 1));
      if (left_free && right_free) {
        flips_[static_cast<std::size_t>(k)].emplace_back(static_cast<Index>(i), basis.index_of(s | bit));
      }
    }
  }
}

std::size_t SiteFlipTable::total() const noexcept {
  std::size_t n = 0;
  for (const auto& f : flips_) n += f.size();
  return n;
}

}  // namespace pxp
