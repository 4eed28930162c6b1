#include <Eigen/Dense>
#include <bit>
#include <random>
#include <sstream>

#include "doctest.h"
#include "oracles.hpp"
#include "pxp/errors.hpp"
#include "pxp/hamiltonian.hpp"

using namespace pxp;

TEST_CASE("L=2 matrix by hand") {
  const auto h = build_pxp(enumerate_basis(2));
  Eigen::Matrix3d expected;
  expected << 0, 1, 1, 1, 0, 0, 1, 0, 0;
  CHECK((h.to_dense() - expected).cwiseAbs().maxCoeff() == 0.0);

  Eigen::VectorXcd e0 = Eigen::VectorXcd::Zero(3);
  e0(0) = 1.0;
  Eigen::VectorXcd out = h * e0;
  CHECK(out(0) == std::complex<double>(0.0));
  CHECK(out(1) == std::complex<double>(1.0));
  CHECK(out(2) == std::complex<double>(1.0));

  const auto scaled = build_pxp(enumerate_basis(2), 0.5);
  out = scaled * e0;
  CHECK(out(1) == std::complex<double>(0.5));
}

TEST_CASE("L=3 flips of |010> are blocked except site 2") {
  const auto basis = enumerate_basis(3);
  const auto h = build_pxp(basis);
  const auto neighbors = h.neighbors(basis.index_of(0b010));
  REQUIRE(neighbors.size() == 1);
  CHECK(neighbors[0] == basis.index_of(0b000));
}

TEST_CASE("dense matrix equals projection of the full-space operator") {
  for (int L = 1; L <= 10; ++L) {
    for (double detuning : {0.0, 0.37}) {
      const auto basis = enumerate_basis(L);
      const auto brute = oracle::brute_force_basis(L);
      const Eigen::MatrixXd full = oracle::full_space_pxp(L, 1.0, detuning);
      const Eigen::MatrixXd dense = build_pxp(basis, 1.0, detuning).to_dense();
      double diff = 0.0;
      for (std::size_t a = 0; a < brute.size(); ++a) {
        for (std::size_t b = 0; b < brute.size(); ++b) {
          diff = std::max(diff, std::abs(full(brute[a], brute[b]) -
                                         dense(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b))));
        }
      }
      CHECK(diff < 1e-12);
    }
  }
}

TEST_CASE("structure invariants") {
  std::mt19937 rng(7);
  std::normal_distribution<double> normal;
  for (int L = 2; L <= 12; ++L) {
    const auto basis = enumerate_basis(L);
    const auto h = build_pxp(basis, 1.0, 0.3);
    const Eigen::MatrixXd dense = h.to_dense();
    CHECK((dense - dense.transpose()).cwiseAbs().maxCoeff() == 0.0);

    std::size_t flippable = 0;
    for (std::size_t i = 0; i < basis.size(); ++i) {
      CHECK(h.diagonal(i) == doctest::Approx(0.3 * std::popcount(basis[i])));
      for (int k = 0; k < L; ++k) flippable += is_blockaded(basis[i] ^ (Pattern{1} << k)) ? 1 : 0;
      for (Index c : h.neighbors(i)) {
        // Exactly one bit differs and the target is an allowed pattern.
        CHECK(std::popcount(basis[i] ^ basis[c]) == 1);
        CHECK(is_blockaded(basis[c]));
      }
    }
    CHECK(h.nnz() == flippable);
    CHECK(build_pxp(basis).to_dense().trace() == 0.0);

    const auto n = static_cast<Eigen::Index>(basis.size());
    Eigen::VectorXcd u(n), v(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      u(i) = {normal(rng), normal(rng)};
      v(i) = {normal(rng), normal(rng)};
    }
    const Eigen::VectorXcd hu = h * u, hv = h * v;
    CHECK(std::abs(u.dot(hv) - hu.dot(v)) < 1e-12 * (1.0 + std::abs(u.dot(hv))));
    CHECK(std::abs(v.dot(hv).imag()) < 1e-12 * (1.0 + v.squaredNorm()));

    // matvec agrees with the dense matrix on basis vectors exactly.
    for (Eigen::Index i = 0; i < n; ++i) {
      Eigen::VectorXd e = Eigen::VectorXd::Zero(n);
      e(i) = 1.0;
      CHECK((h * e - dense.col(i)).cwiseAbs().maxCoeff() == 0.0);
    }
  }
}

TEST_CASE("spectrum is symmetric under E -> -E at zero detuning") {
  for (int L = 2; L <= 12; ++L) {
    const Eigen::MatrixXd dense = build_pxp(enumerate_basis(L)).to_dense();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(dense, Eigen::EigenvaluesOnly);
    const Eigen::VectorXd e = es.eigenvalues();
    const Eigen::Index n = e.size();
    for (Eigen::Index i = 0; i < n; ++i) CHECK(std::abs(e(i) + e(n - 1 - i)) < 1e-10);
  }
}

TEST_CASE("errors") {
  const auto h = build_pxp(enumerate_basis(4));
  CHECK_THROWS_AS(h * Eigen::VectorXcd::Zero(5), ShapeError);
  CHECK_THROWS_AS(h.to_dense(7), CapacityError);
  CHECK_THROWS_AS(build_pxp(enumerate_basis(4), 0.0), DomainError);
  CHECK_NOTHROW(h.to_dense(8));
}

TEST_CASE("triplet dump") {
  std::ostringstream os;
  build_pxp(enumerate_basis(2)).write_triplets(os);
  CHECK(os.str() == "0 1 1\n0 2 1\n1 0 1\n2 0 1\n");
}
