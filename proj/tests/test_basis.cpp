#include <set>

#include "doctest.h"
#include "oracles.hpp"
#include "pxp/basis.hpp"
#include "pxp/errors.hpp"

using namespace pxp;

TEST_CASE("fib follows F1 = F2 = 1") {
  CHECK(fib(1) == 1);
  CHECK(fib(2) == 1);
  CHECK(fib(6) == 8);
  CHECK(fib(22) == 17711);
  for (int n = 1; n <= 92; ++n) CHECK(fib(n) == oracle::fibonacci_by_recurrence(n));
  CHECK_THROWS_AS(fib(0), RangeError);
  CHECK_THROWS_AS(fib(93), RangeError);
}

TEST_CASE("enumerate_basis small cases") {
  const auto b1 = enumerate_basis(1);
  REQUIRE(b1.size() == 2);
  CHECK(b1[0] == 0);
  CHECK(b1[1] == 1);

  const auto b4 = enumerate_basis(4);
  const std::vector<Pattern> expected{0b0000, 0b0001, 0b0010, 0b0100, 0b0101, 0b1000, 0b1001, 0b1010};
  CHECK(std::vector<Pattern>(b4.states().begin(), b4.states().end()) == expected);

  CHECK(enumerate_basis(20).size() == 17711);
  CHECK_THROWS_AS(enumerate_basis(0), RangeError);
  CHECK_THROWS_AS(enumerate_basis(31), RangeError);
}

TEST_CASE("enumerate_basis matches brute force and its invariants") {
  for (int L = 1; L <= 16; ++L) {
    const auto basis = enumerate_basis(L);
    const auto brute = oracle::brute_force_basis(L);
    REQUIRE(basis.size() == brute.size());
    CHECK(basis.size() == fib(L + 2));
    for (std::size_t i = 0; i < brute.size(); ++i) {
      CHECK(basis[i] == brute[i]);
      CHECK(is_blockaded(basis[i]));
      CHECK(basis.index_of(basis[i]) == i);
      if (i > 0) CHECK(basis[i - 1] < basis[i]);
    }
    // Forbidden and out-of-range patterns are rejected.
    for (Pattern s = 0; s < (Pattern{1} << (L + 1)); ++s) {
      const bool member = is_blockaded(s) && (s >> L) == 0;
      CHECK(basis.find(s).has_value() == member);
    }
  }
}

TEST_CASE("recursive split on site 1") {
  for (int L = 2; L <= 20; ++L) {
    const auto basis = enumerate_basis(L);
    std::size_t clear = 0, set = 0;
    for (Pattern s : basis.states()) (s & 1U ? set : clear)++;
    CHECK(clear == fib(L + 1));
    CHECK(set == fib(L));
  }
}

TEST_CASE("bipartition L=2 prefix 1 by hand") {
  const auto basis = enumerate_basis(2);
  const auto map = bipartition(basis, 1);
  // basis order {00, 01, 10}; 01 means site 1 excited.
  REQUIRE(map.pairs.size() == 3);
  CHECK(map.pairs[0] == std::pair<Index, Index>{0, 0});
  CHECK(map.pairs[1] == std::pair<Index, Index>{1, 0});
  CHECK(map.pairs[2] == std::pair<Index, Index>{0, 1});
}

TEST_CASE("bipartition invariants") {
  for (int L = 2; L <= 12; ++L) {
    const auto basis = enumerate_basis(L);
    for (int l = 1; l < L; ++l) {
      const auto map = bipartition(basis, l);
      REQUIRE(map.pairs.size() == basis.size());
      std::set<std::pair<Index, Index>> distinct(map.pairs.begin(), map.pairs.end());
      CHECK(distinct.size() == fib(L + 2));
      const Pattern last_left = Pattern{1} << (l - 1);
      for (auto [left, right] : map.pairs) {
        CHECK_FALSE(((map.left[left] & last_left) && (map.right[right] & 1U)));
      }
    }
    CHECK_THROWS_AS(bipartition(basis, 0), RangeError);
    CHECK_THROWS_AS(bipartition(basis, L), RangeError);
  }
}

TEST_CASE("site flip table counts flippable sites") {
  for (int L = 1; L <= 12; ++L) {
    const auto basis = enumerate_basis(L);
    std::size_t expected = 0;
    for (Pattern s : oracle::brute_force_basis(L)) {
      for (int k = 0; k < L; ++k) {
        const Pattern t = s ^ (Pattern{1} << k);
        if (!(s & (Pattern{1} << k)) && is_blockaded(t)) ++expected;
      }
    }
    CHECK(SiteFlipTable(basis).total() == expected);
  }
}
