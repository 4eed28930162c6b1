#pragma once

#include <Eigen/Core>
#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <numeric>
#include <string>
#include <vector>

#include "pxp/errors.hpp"
#include "pxp/hamiltonian.hpp"
#include "pxp/lanczos.hpp"

namespace pxp {

template <typename Real>
using VectorX = Eigen::Matrix<Real, Eigen::Dynamic, 1>;
template <typename Real>
using MatrixX = Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Real>
using ComplexVector = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, 1>;

/// Full spectral decomposition of a real symmetric matrix. Column n of `vectors`
/// is the eigenvector of `energies[n]`; energies ascend.
template <typename Real = double>
struct EigenDecomposition {
  VectorX<Real> energies;
  MatrixX<Real> vectors;

  Eigen::Index size() const noexcept { return energies.size(); }
};

/// Dense symmetric diagonalization.
///
/// Eigenvalues closer than `tie_tol` (relative to the spectral width) form a tie
/// group; inside a group vectors are ordered by the index of their first component
/// larger than 1e-12 in magnitude. Every vector is signed so that this component is
/// positive. Within a degenerate subspace the vectors themselves are whatever the
/// solver returned, so this order is deterministic but carries no physics.
template <typename Real>
EigenDecomposition<Real> diagonalize(const MatrixX<Real>& dense, Real tie_tol = Real(1e-10)) {
  if (dense.rows() != dense.cols()) throw ShapeError("diagonalize: matrix is not square");
  Eigen::SelfAdjointEigenSolver<MatrixX<Real>> solver(dense);
  if (solver.info() != Eigen::Success) {
    throw NumericalError("diagonalize: symmetric eigensolver did not converge (dimension " +
                         std::to_string(dense.rows()) + ")");
  }
  const Eigen::Index n = dense.rows();
  const VectorX<Real>& e = solver.eigenvalues();
  MatrixX<Real> v = solver.eigenvectors();

  std::vector<Eigen::Index> lead(static_cast<std::size_t>(n), 0);
  for (Eigen::Index k = 0; k < n; ++k) {
    Eigen::Index i = 0;
    while (i + 1 < n && std::abs(v(i, k)) <= Real(1e-12)) ++i;
    lead[static_cast<std::size_t>(k)] = i;
    if (v(i, k) < Real(0)) v.col(k) = -v.col(k);
  }

  const Real width = n > 0 ? std::max(Real(1), e(n - 1) - e(0)) : Real(1);
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index(0));
  for (Eigen::Index start = 0; start < n;) {
    Eigen::Index stop = start + 1;
    while (stop < n && e(stop) - e(stop - 1) <= tie_tol * width) ++stop;
    std::stable_sort(order.begin() + start, order.begin() + stop, [&](Eigen::Index a, Eigen::Index b) {
      return lead[static_cast<std::size_t>(a)] < lead[static_cast<std::size_t>(b)];
    });
    start = stop;
  }

  EigenDecomposition<Real> out{VectorX<Real>(n), MatrixX<Real>(n, n)};
  for (Eigen::Index k = 0; k < n; ++k) {
    out.energies(k) = e(order[static_cast<std::size_t>(k)]);
    out.vectors.col(k) = v.col(order[static_cast<std::size_t>(k)]);
  }
  return out;
}

/// Uniform grid t_k = k * dt, k = 0..n_steps.
struct TimeGrid {
  double dt = 0.05;
  std::size_t n_steps = 0;

  static TimeGrid up_to(double t_max, double dt) {
    if (!(dt > 0.0) || !std::isfinite(dt)) throw RangeError("time grid: dt must be positive");
    if (!(t_max >= 0.0) || !std::isfinite(t_max)) throw RangeError("time grid: t_max must be non-negative");
    return {dt, static_cast<std::size_t>(std::llround(t_max / dt))};
  }

  std::size_t size() const noexcept { return n_steps + 1; }
  double time(std::size_t k) const noexcept { return static_cast<double>(k) * dt; }
  double t_max() const noexcept { return time(n_steps); }
};

/// psi(t) = exp(-iHt) psi0 from a full eigendecomposition. The spectral coefficients
/// are computed once; each call costs one dense matrix-vector product.
template <typename Real = double>
class ExactPropagator {
 public:
  ExactPropagator(const EigenDecomposition<Real>& eig, const ComplexVector<Real>& psi0)
      : eig_(eig), psi0_(psi0) {
    if (psi0.size() != eig.size()) {
      throw ShapeError("evolve_exact: state length " + std::to_string(psi0.size()) + " vs spectrum size " +
                       std::to_string(eig.size()));
    }
    coefficients_ = real_product(eig_.vectors.transpose(), psi0_);
  }

  ComplexVector<Real> at(Real t) const {
    if (t == Real(0)) return psi0_;
    ComplexVector<Real> phased(coefficients_.size());
    for (Eigen::Index n = 0; n < coefficients_.size(); ++n) {
      phased(n) = std::polar(Real(1), -eig_.energies(n) * t) * coefficients_(n);
    }
    return real_product(eig_.vectors, phased);
  }

  /// c_n = <E_n|psi0>.
  const ComplexVector<Real>& coefficients() const noexcept { return coefficients_; }

 private:
  // Real matrix times complex vector without a complex copy of the matrix.
  template <typename M>
  static ComplexVector<Real> real_product(const M& m, const ComplexVector<Real>& v) {
    const VectorX<Real> re = m * v.real();
    const VectorX<Real> im = m * v.imag();
    ComplexVector<Real> out(re.size());
    out.real() = re;
    out.imag() = im;
    return out;
  }

  const EigenDecomposition<Real>& eig_;
  ComplexVector<Real> psi0_;
  ComplexVector<Real> coefficients_;
};

template <typename Real>
ComplexVector<Real> evolve_exact(const EigenDecomposition<Real>& eig, const ComplexVector<Real>& psi0, Real t) {
  return ExactPropagator<Real>(eig, psi0).at(t);
}

struct KrylovOptions {
  int krylov_dim = 30;
  double tol = 1e-12;
  double min_substep = 1e-9;
  // Per-step tolerance on |norm after - norm before|; exceeding it is an error.
  double norm_drift_limit = 1e-12;
};

struct KrylovStats {
  std::size_t steps = 0;
  std::size_t substeps = 0;
  std::size_t matvecs = 0;
  double max_error_estimate = 0.0;
  double max_norm_drift = 0.0;
};

/// Short-iterative Lanczos propagator: exp(-iHt) psi is approximated in the Krylov
/// space K_m(H, psi) as |psi| V exp(-i t T) e_1. The a-posteriori error of a step h is
/// estimated by beta_m |[exp(-i h T) e_1]_m|; the space is grown until the whole
/// remaining interval meets `tol`, and when the dimension cap is hit the step is
/// halved (the same Krylov space serves every trial h).
template <typename Real = double>
class KrylovPropagator {
 public:
  KrylovPropagator(const PxpHamiltonian<Real>& hamiltonian, KrylovOptions options = {})
      : hamiltonian_(hamiltonian), options_(options), lanczos_(hamiltonian, options.krylov_dim) {
    if (options.krylov_dim < 2) throw RangeError("Krylov dimension must be at least 2");
    if (!(options.tol > 0.0)) throw RangeError("Krylov tolerance must be positive");
  }

  /// psi <- exp(-iHt) psi; t may be negative.
  void advance(ComplexVector<Real>& psi, Real t) {
    if (psi.size() != static_cast<Eigen::Index>(hamiltonian_.dim())) {
      throw ShapeError("evolve_krylov: state length does not match Hamiltonian dimension");
    }
    ++stats_.steps;
    Real remaining = t;
    Real trial = t;
    while (remaining != Real(0)) {
      const Real norm_before = psi.norm();
      lanczos_.start(psi);
      Real h = std::abs(trial) < std::abs(remaining) ? trial : remaining;
      Real error = Real(0);
      ComplexVector<Real> y;
      while (true) {
        const bool grew = lanczos_.extend();
        ++stats_.matvecs;
        y = small_exponential(h, error);
        if (error <= options_.tol || lanczos_.invariant()) break;
        if (!grew) {
          // Dimension cap reached: shrink the step inside the same Krylov space.
          while (error > options_.tol) {
            h /= Real(2);
            if (std::abs(h) < options_.min_substep) {
              throw NumericalError("evolve_krylov: error estimate " + std::to_string(error) +
                                   " above tolerance at minimal sub-step " + std::to_string(h));
            }
            y = small_exponential(h, error);
          }
          break;
        }
      }
      psi.noalias() = norm_before * (lanczos_.basis() * y);
      const double drift = std::abs(static_cast<double>(psi.norm() - norm_before));
      stats_.max_norm_drift = std::max(stats_.max_norm_drift, drift);
      stats_.max_error_estimate = std::max(stats_.max_error_estimate, static_cast<double>(error));
      if (drift > options_.norm_drift_limit) {
        throw NumericalError("evolve_krylov: norm drift " + std::to_string(drift) + " in one step");
      }
      ++stats_.substeps;
      remaining -= h;
      trial = h;
      if (std::abs(remaining) < std::abs(t) * std::numeric_limits<Real>::epsilon() * Real(16)) remaining = Real(0);
    }
  }

  const KrylovStats& stats() const noexcept { return stats_; }
  const KrylovOptions& options() const noexcept { return options_; }

 private:
  // exp(-i h T) e_1 in the current Krylov space, with the error estimate.
  ComplexVector<Real> small_exponential(Real h, Real& error) const {
    const MatrixX<Real> t = lanczos_.tridiagonal();
    Eigen::SelfAdjointEigenSolver<MatrixX<Real>> es(t);
    const Eigen::Index k = t.rows();
    ComplexVector<Real> phases(k);
    for (Eigen::Index i = 0; i < k; ++i) {
      phases(i) = std::polar(Real(1), -h * es.eigenvalues()(i)) * es.eigenvectors()(0, i);
    }
    ComplexVector<Real> y = es.eigenvectors().template cast<std::complex<Real>>() * phases;
    error = lanczos_.residual_beta() * std::abs(y(k - 1));
    return y;
  }

  const PxpHamiltonian<Real>& hamiltonian_;
  KrylovOptions options_;
  Lanczos<std::complex<Real>, PxpHamiltonian<Real>> lanczos_;
  KrylovStats stats_;
};

/// Calls `visit(k, psi_k)` for every grid point, starting with psi0 at k = 0.
template <typename Real, typename Visitor>
KrylovStats evolve_krylov(const PxpHamiltonian<Real>& h, const ComplexVector<Real>& psi0, const TimeGrid& grid,
                          const KrylovOptions& options, Visitor&& visit) {
  KrylovPropagator<Real> propagator(h, options);
  ComplexVector<Real> psi = psi0;
  visit(std::size_t{0}, static_cast<const ComplexVector<Real>&>(psi));
  for (std::size_t k = 1; k < grid.size(); ++k) {
    propagator.advance(psi, static_cast<Real>(grid.dt));
    visit(k, static_cast<const ComplexVector<Real>&>(psi));
  }
  return propagator.stats();
}

/// Snapshot-returning convenience overload (memory grows with the grid).
template <typename Real>
std::vector<ComplexVector<Real>> evolve_krylov(const PxpHamiltonian<Real>& h, const ComplexVector<Real>& psi0,
                                               const TimeGrid& grid, const KrylovOptions& options = {}) {
  std::vector<ComplexVector<Real>> snapshots;
  snapshots.reserve(grid.size());
  evolve_krylov(h, psi0, grid, options, [&](std::size_t, const ComplexVector<Real>& psi) { snapshots.push_back(psi); });
  return snapshots;
}

enum class Extremal { lowest, highest };

template <typename Real = double>
struct Eigenpair {
  Real energy;
  VectorX<Real> vector;
  Real residual;
  int restarts;
};

/// Extremal eigenpair by explicitly restarted Lanczos (restart from the current
/// Ritz vector). The start vector is a fixed deterministic pattern with no
/// spatial symmetry, so no symmetry sector is missed.
template <typename Real>
Eigenpair<Real> extremal_eigenpair(const PxpHamiltonian<Real>& h, Extremal which, Real tol = Real(1e-10),
                                   Eigen::Index subspace = 60, int max_restarts = 500) {
  if (!(tol > Real(0))) throw RangeError("extremal_eigenpair: tolerance must be positive");
  const auto n = static_cast<Eigen::Index>(h.dim());
  VectorX<Real> v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = Real(1) + Real(0.5) * std::sin(Real(0.7548776662466927) * Real(i + 1));
  Lanczos<Real, PxpHamiltonian<Real>> lanczos(h, std::min(subspace, n));
  VectorX<Real> hv(n);
  Real residual = std::numeric_limits<Real>::infinity();
  Real theta = 0;
  for (int restart = 0; restart <= max_restarts; ++restart) {
    lanczos.start(v);
    while (lanczos.extend()) {
    }
    Eigen::SelfAdjointEigenSolver<MatrixX<Real>> es(lanczos.tridiagonal());
    const Eigen::Index pick = which == Extremal::highest ? es.eigenvalues().size() - 1 : 0;
    theta = es.eigenvalues()(pick);
    v = lanczos.basis() * es.eigenvectors().col(pick);
    v.normalize();
    h.apply(v, hv);
    residual = (hv - theta * v).norm();
    if (residual < tol) {
      Eigen::Index i = 0;
      while (i + 1 < n && std::abs(v(i)) <= Real(1e-12)) ++i;
      if (v(i) < Real(0)) v = -v;
      return {theta, v, residual, restart};
    }
  }
  throw NumericalError("extremal_eigenpair: residual " + std::to_string(static_cast<double>(residual)) +
                       " above tolerance after " + std::to_string(max_restarts) + " restarts (Ritz value " +
                       std::to_string(static_cast<double>(theta)) + ")");
}

/// Gauss quadrature of the spectral measure of `psi0`: `steps` Lanczos iterations
/// starting from psi0 give Ritz values (nodes) and squared first components of the
/// Ritz vectors (weights). Converged nodes (small `residuals`) carry the exact
/// overlap |<E_n|psi0>|^2 of an isolated eigenvalue.
template <typename Real = double>
struct SpectralQuadrature {
  VectorX<Real> nodes;
  VectorX<Real> weights;
  VectorX<Real> residuals;
};

template <typename Real>
SpectralQuadrature<Real> lanczos_quadrature(const PxpHamiltonian<Real>& h, const VectorX<Real>& psi0,
                                            Eigen::Index steps) {
  Lanczos<Real, PxpHamiltonian<Real>> lanczos(h, steps);
  const Real norm = lanczos.start(psi0);
  while (lanczos.extend()) {
  }
  Eigen::SelfAdjointEigenSolver<MatrixX<Real>> es(lanczos.tridiagonal());
  const Eigen::Index k = es.eigenvalues().size();
  SpectralQuadrature<Real> q{es.eigenvalues(), VectorX<Real>(k), VectorX<Real>(k)};
  for (Eigen::Index i = 0; i < k; ++i) {
    q.weights(i) = norm * norm * es.eigenvectors()(0, i) * es.eigenvectors()(0, i);
    q.residuals(i) = lanczos.residual_beta() * std::abs(es.eigenvectors()(k - 1, i));
  }
  return q;
}

}  // namespace pxp
