#pragma once

#include <Eigen/Core>
#include <Eigen/Eigenvalues>
#include <cmath>
#include <complex>
#include <vector>

#include "pxp/basis.hpp"
#include "pxp/propagator.hpp"
#include "pxp/states.hpp"

namespace pxp {

using QubitDensityMatrix = Eigen::Matrix2cd;
// Reduced state of sites [1, l] in the blockaded basis of the block (dimension fib(l + 2)).
using BlockDensityMatrix = Eigen::MatrixXcd;

inline constexpr double kDensityTol = 1e-12;

/// Throws DomainError unless rho is Hermitian, unit trace and PSD within `tol`.
template <typename Derived>
void check_density_matrix(const Eigen::MatrixBase<Derived>& rho, double tol = kDensityTol);

/// Hermitian eigenvalues with values in [-tol, 0) clamped to zero; more negative
/// values raise DomainError.
template <typename Derived>
Eigen::VectorXd clamped_eigenvalues(const Eigen::MatrixBase<Derived>& rho, double tol = kDensityTol);

/// Single-site reduced density matrices, sharing one flip table across sites and calls.
/// All reduced matrices are those of psi / |psi|, so they have unit trace even when
/// propagation has let the norm drift by rounding.
class SiteReducer {
 public:
  explicit SiteReducer(const BlockadedBasis& basis);

  int sites() const noexcept { return basis_->sites(); }
  /// rho_j for 1-based site j.
  QubitDensityMatrix rdm(const StateVector& psi, int j) const;
  std::vector<QubitDensityMatrix> all(const StateVector& psi) const;

 private:
  void check(const StateVector& psi) const;

  const BlockadedBasis* basis_;
  SiteFlipTable flips_;
};

QubitDensityMatrix single_site_rdm(const BlockadedBasis& basis, const StateVector& psi, int j);

/// Coefficient matrix M[left, right] of psi across the bipartition.
Eigen::MatrixXcd coefficient_matrix(const BipartitionMap& map, const StateVector& psi);
/// rho = M M^dagger on the prefix block.
BlockDensityMatrix block_rdm(const BipartitionMap& map, const StateVector& psi);
BlockDensityMatrix block_rdm(const BlockadedBasis& basis, const StateVector& psi, int prefix);

/// Uhlmann fidelity of two qubit states. Computed by the matrix square-root route
/// and by the closed form Tr(rho sigma) + 2 sqrt(det rho det sigma); the two must
/// agree (NumericalError otherwise) and the closed form is returned.
double uhlmann_fidelity(const QubitDensityMatrix& rho, const QubitDensityMatrix& sigma);
/// [Tr sqrt(sqrt(rho) sigma sqrt(rho))]^2 for any dimension.
double uhlmann_fidelity_sqrtm(const Eigen::MatrixXcd& rho, const Eigen::MatrixXcd& sigma);
double uhlmann_fidelity_closed_form(const QubitDensityMatrix& rho, const QubitDensityMatrix& sigma);
/// Tolerance the two qubit routes must meet. The square-root route loses accuracy
/// like sqrt(eps) when either state is (nearly) pure, so 1e-10 applies only when
/// both determinants exceed 1e-6.
double qubit_fidelity_agreement_tol(const QubitDensityMatrix& rho, const QubitDensityMatrix& sigma);

/// (1/2) sum |eigenvalues(rho - sigma)|.
double trace_distance(const Eigen::MatrixXcd& rho, const Eigen::MatrixXcd& sigma);
/// sqrt(1 - F): the upper bound on the trace distance implied by fidelity F.
double max_trace_distance(double fidelity);

/// <Z_j> = rho_11 - rho_00.
double magnetization(const QubitDensityMatrix& rho);
double magnetization(const BlockadedBasis& basis, const StateVector& psi, int j);

/// Per-site comparison of a state against the initial one.
struct LocalComparison {
  std::vector<double> fidelity;        // F_j
  std::vector<double> trace_distance;  // D_j computed from the eigenvalues of rho_j(t) - rho_j(0)
  std::vector<double> magnetization;   // Z_j(t)

  double average_fidelity() const;
  double average_max_trace_distance() const;
  /// prod_j F_j and sum_j ln F_j (-inf when a factor vanishes).
  double product_fidelity() const;
  double log_product_fidelity() const;
};

LocalComparison compare_local(const std::vector<QubitDensityMatrix>& initial,
                              const std::vector<QubitDensityMatrix>& current);

/// (1/L) sum_j F(rho_j(0), rho_j(t)).
double avg_local_fidelity(const BlockadedBasis& basis, const StateVector& psi0, const StateVector& psit);

struct ProductFidelity {
  double value;
  double log_value;
};
ProductFidelity product_local_fidelity(const BlockadedBasis& basis, const StateVector& psi0, const StateVector& psit);

double global_fidelity(const StateVector& psi0, const StateVector& psit);

/// Von Neumann entropy (natural log) of the prefix [1, l] from the Schmidt spectrum.
/// Schmidt coefficients below 1e-14 are skipped.
double entanglement_entropy(const BipartitionMap& map, const StateVector& psi);
double entanglement_entropy(const BlockadedBasis& basis, const StateVector& psi, int prefix);
/// ln(min(fib(l + 2), fib(L - l + 2))).
double entropy_bound(int sites, int prefix);

/// Values of one observable on a time grid.
struct TimeSeries {
  TimeGrid grid;
  std::vector<double> values;

  TimeSeries(TimeGrid g, std::vector<double> v);
};

/// Running mean (1/t) int_0^t f by the trapezoidal rule; f(0) at t = 0.
TimeSeries cesaro_average(const TimeSeries& series);
/// sqrt((1/t) int_0^t [f(t') - fbar(t')]^2 dt'), fbar being the running mean at t'.
TimeSeries running_std(const TimeSeries& series);
/// sqrt(mean(f^2) - mean(f)^2) with running means, for comparison with running_std.
TimeSeries running_std_conventional(const TimeSeries& series);

// ---------------------------------------------------------------------------

template <typename Derived>
Eigen::VectorXd clamped_eigenvalues(const Eigen::MatrixBase<Derived>& rho, double tol) {
  using Matrix = Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  Eigen::SelfAdjointEigenSolver<Matrix> es(Matrix(rho), Eigen::EigenvaluesOnly);
  Eigen::VectorXd ev = es.eigenvalues();
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    if (ev(i) < -tol) throw DomainError("density matrix has eigenvalue " + std::to_string(ev(i)));
    if (ev(i) < 0.0) ev(i) = 0.0;
  }
  return ev;
}

template <typename Derived>
void check_density_matrix(const Eigen::MatrixBase<Derived>& rho, double tol) {
  if (rho.rows() != rho.cols()) throw ShapeError("density matrix is not square");
  const double herm = (rho - rho.adjoint()).cwiseAbs().maxCoeff();
  if (herm > tol) throw DomainError("density matrix is not Hermitian (deviation " + std::to_string(herm) + ")");
  const double trace_err = std::abs(rho.trace() - typename Derived::Scalar(1));
  if (trace_err > tol) throw DomainError("density matrix trace deviates from 1 by " + std::to_string(trace_err));
  clamped_eigenvalues(rho, tol);
}

}  // namespace pxp
