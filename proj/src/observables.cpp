#include "pxp/observables.hpp"

#include <algorithm>
#include <bit>
#include <limits>
#include <string>

#include "pxp/errors.hpp"

namespace pxp {

namespace {

double det2(const QubitDensityMatrix& m) { return (m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0)).real(); }

void check_same_length(const StateVector& a, const StateVector& b, const char* what) {
  if (a.size() != b.size()) {
    throw ShapeError(std::string(what) + ": state lengths " + std::to_string(a.size()) + " and " +
                     std::to_string(b.size()) + " differ");
  }
}

}  // namespace

SiteReducer::SiteReducer(const BlockadedBasis& basis) : basis_(&basis), flips_(basis) {}

void SiteReducer::check(const StateVector& psi) const {
  if (static_cast<std::size_t>(psi.size()) != basis_->size()) {
    throw ShapeError("reduced density matrix: state length " + std::to_string(psi.size()) + " vs basis size " +
                     std::to_string(basis_->size()));
  }
  if (!(psi.squaredNorm() > 0.0)) throw DomainError("reduced density matrix of a zero vector");
}

QubitDensityMatrix SiteReducer::rdm(const StateVector& psi, int j) const {
  check(psi);
  if (j < 1 || j > sites()) {
    throw RangeError("site " + std::to_string(j) + " outside [1, " + std::to_string(sites()) + "]");
  }
  const Pattern bit = Pattern{1} << (j - 1);
  const double norm2 = psi.squaredNorm();
  double excited = 0.0, empty = 0.0;
  for (std::size_t i = 0; i < basis_->size(); ++i) {
    const double w = std::norm(psi(static_cast<Eigen::Index>(i)));
    ((*basis_)[i] & bit ? excited : empty) += w;
  }
  std::complex<double> coherence = 0.0;
  for (auto [lo, hi] : flips_.site(j)) coherence += psi(lo) * std::conj(psi(hi));
  QubitDensityMatrix rho;
  rho << empty, coherence, std::conj(coherence), excited;
  return rho / norm2;
}

std::vector<QubitDensityMatrix> SiteReducer::all(const StateVector& psi) const {
  check(psi);
  const int L = sites();
  std::vector<double> excited(static_cast<std::size_t>(L), 0.0);
  double total = 0.0;
  for (std::size_t i = 0; i < basis_->size(); ++i) {
    const double w = std::norm(psi(static_cast<Eigen::Index>(i)));
    total += w;
    for (Pattern s = (*basis_)[i]; s != 0; s &= s - 1) excited[static_cast<std::size_t>(std::countr_zero(s))] += w;
  }
  std::vector<QubitDensityMatrix> out(static_cast<std::size_t>(L));
  for (int j = 1; j <= L; ++j) {
    std::complex<double> coherence = 0.0;
    for (auto [lo, hi] : flips_.site(j)) coherence += psi(lo) * std::conj(psi(hi));
    const double e = excited[static_cast<std::size_t>(j - 1)];
    out[static_cast<std::size_t>(j - 1)] << total - e, coherence, std::conj(coherence), e;
    out[static_cast<std::size_t>(j - 1)] /= total;
  }
  return out;
}

QubitDensityMatrix single_site_rdm(const BlockadedBasis& basis, const StateVector& psi, int j) {
  return SiteReducer(basis).rdm(psi, j);
}

Eigen::MatrixXcd coefficient_matrix(const BipartitionMap& map, const StateVector& psi) {
  if (static_cast<std::size_t>(psi.size()) != map.pairs.size()) {
    throw ShapeError("coefficient_matrix: state length does not match the bipartition");
  }
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(map.left.size()),
                                              static_cast<Eigen::Index>(map.right.size()));
  for (std::size_t i = 0; i < map.pairs.size(); ++i) {
    m(map.pairs[i].first, map.pairs[i].second) = psi(static_cast<Eigen::Index>(i));
  }
  return m;
}

BlockDensityMatrix block_rdm(const BipartitionMap& map, const StateVector& psi) {
  const Eigen::MatrixXcd m = coefficient_matrix(map, psi);
  const double norm2 = m.squaredNorm();
  if (!(norm2 > 0.0)) throw DomainError("reduced density matrix of a zero vector");
  return m * m.adjoint() / norm2;
}

BlockDensityMatrix block_rdm(const BlockadedBasis& basis, const StateVector& psi, int prefix) {
  return block_rdm(bipartition(basis, prefix), psi);
}

double uhlmann_fidelity_sqrtm(const Eigen::MatrixXcd& rho, const Eigen::MatrixXcd& sigma) {
  if (rho.rows() != sigma.rows() || rho.cols() != sigma.cols()) {
    throw ShapeError("uhlmann_fidelity: matrices of different dimensions");
  }
  check_density_matrix(rho);
  check_density_matrix(sigma);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho);
  Eigen::VectorXd roots = es.eigenvalues();
  for (Eigen::Index i = 0; i < roots.size(); ++i) roots(i) = std::sqrt(std::max(roots(i), 0.0));
  const Eigen::MatrixXcd sqrt_rho = es.eigenvectors() * roots.asDiagonal() * es.eigenvectors().adjoint();
  Eigen::MatrixXcd inner = sqrt_rho * sigma * sqrt_rho;
  inner = 0.5 * (inner + inner.adjoint()).eval();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> inner_es(inner, Eigen::EigenvaluesOnly);
  double trace = 0.0;
  for (Eigen::Index i = 0; i < inner_es.eigenvalues().size(); ++i) {
    trace += std::sqrt(std::max(inner_es.eigenvalues()(i), 0.0));
  }
  return std::min(trace * trace, 1.0);
}

double uhlmann_fidelity_closed_form(const QubitDensityMatrix& rho, const QubitDensityMatrix& sigma) {
  const double overlap = (rho * sigma).trace().real();
  const double dets = std::max(det2(rho), 0.0) * std::max(det2(sigma), 0.0);
  return std::clamp(overlap + 2.0 * std::sqrt(dets), 0.0, 1.0);
}

double qubit_fidelity_agreement_tol(const QubitDensityMatrix& rho, const QubitDensityMatrix& sigma) {
  const double smallest = std::min(det2(rho), det2(sigma));
  return 1e-10 + 16.0 * std::numeric_limits<double>::epsilon() / std::sqrt(std::max(smallest, 1e-16));
}

double uhlmann_fidelity(const QubitDensityMatrix& rho, const QubitDensityMatrix& sigma) {
  const double via_sqrtm = uhlmann_fidelity_sqrtm(rho, sigma);
  const double closed = uhlmann_fidelity_closed_form(rho, sigma);
  if (std::abs(via_sqrtm - closed) > qubit_fidelity_agreement_tol(rho, sigma)) {
    throw NumericalError("uhlmann_fidelity: square-root route " + std::to_string(via_sqrtm) +
                         " disagrees with closed form " + std::to_string(closed));
  }
  return closed;
}

double trace_distance(const Eigen::MatrixXcd& rho, const Eigen::MatrixXcd& sigma) {
  if (rho.rows() != sigma.rows() || rho.cols() != sigma.cols()) {
    throw ShapeError("trace_distance: matrices of different dimensions");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho - sigma, Eigen::EigenvaluesOnly);
  return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

double max_trace_distance(double fidelity) {
  if (!(fidelity >= -1e-12 && fidelity <= 1.0 + 1e-12)) {
    throw RangeError("max_trace_distance: fidelity " + std::to_string(fidelity) + " outside [0, 1]");
  }
  return std::sqrt(std::clamp(1.0 - fidelity, 0.0, 1.0));
}

double magnetization(const QubitDensityMatrix& rho) { return rho(1, 1).real() - rho(0, 0).real(); }

double magnetization(const BlockadedBasis& basis, const StateVector& psi, int j) {
  return magnetization(single_site_rdm(basis, psi, j));
}

double LocalComparison::average_fidelity() const {
  double sum = 0.0;
  for (double f : fidelity) sum += f;
  return sum / static_cast<double>(fidelity.size());
}

double LocalComparison::average_max_trace_distance() const {
  double sum = 0.0;
  for (double f : fidelity) sum += max_trace_distance(f);
  return sum / static_cast<double>(fidelity.size());
}

double LocalComparison::product_fidelity() const {
  double p = 1.0;
  for (double f : fidelity) p *= f;
  return p;
}

double LocalComparison::log_product_fidelity() const {
  double s = 0.0;
  for (double f : fidelity) s += f > 0.0 ? std::log(f) : -std::numeric_limits<double>::infinity();
  return s;
}

LocalComparison compare_local(const std::vector<QubitDensityMatrix>& initial,
                              const std::vector<QubitDensityMatrix>& current) {
  if (initial.size() != current.size()) throw ShapeError("compare_local: site counts differ");
  LocalComparison out;
  out.fidelity.reserve(initial.size());
  out.trace_distance.reserve(initial.size());
  out.magnetization.reserve(initial.size());
  for (std::size_t j = 0; j < initial.size(); ++j) {
    out.fidelity.push_back(uhlmann_fidelity(initial[j], current[j]));
    // Traceless Hermitian 2x2 difference: eigenvalues are +-|(d00, d01)|.
    const QubitDensityMatrix d = current[j] - initial[j];
    out.trace_distance.push_back(std::sqrt(std::norm(d(0, 0)) + std::norm(d(0, 1))));
    out.magnetization.push_back(magnetization(current[j]));
  }
  return out;
}

double avg_local_fidelity(const BlockadedBasis& basis, const StateVector& psi0, const StateVector& psit) {
  check_same_length(psi0, psit, "avg_local_fidelity");
  const SiteReducer reducer(basis);
  return compare_local(reducer.all(psi0), reducer.all(psit)).average_fidelity();
}

ProductFidelity product_local_fidelity(const BlockadedBasis& basis, const StateVector& psi0,
                                       const StateVector& psit) {
  check_same_length(psi0, psit, "product_local_fidelity");
  const SiteReducer reducer(basis);
  const auto cmp = compare_local(reducer.all(psi0), reducer.all(psit));
  return {cmp.product_fidelity(), cmp.log_product_fidelity()};
}

double global_fidelity(const StateVector& psi0, const StateVector& psit) {
  check_same_length(psi0, psit, "global_fidelity");
  return std::norm(psi0.dot(psit));
}

double entanglement_entropy(const BipartitionMap& map, const StateVector& psi) {
  const Eigen::MatrixXcd m = coefficient_matrix(map, psi);
  // Squared Schmidt coefficients are the eigenvalues of the smaller reduced matrix.
  const double norm2 = m.squaredNorm();
  if (!(norm2 > 0.0)) throw DomainError("entanglement entropy of a zero vector");
  const Eigen::MatrixXcd reduced = m.rows() <= m.cols() ? Eigen::MatrixXcd(m * m.adjoint() / norm2)
                                                        : Eigen::MatrixXcd(m.adjoint() * m / norm2);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(reduced, Eigen::EigenvaluesOnly);
  double s = 0.0;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
    const double p = es.eigenvalues()(i);
    if (p > 1e-28) s -= p * std::log(p);
  }
  return std::max(s, 0.0);
}

double entanglement_entropy(const BlockadedBasis& basis, const StateVector& psi, int prefix) {
  return entanglement_entropy(bipartition(basis, prefix), psi);
}

double entropy_bound(int sites, int prefix) {
  return std::log(static_cast<double>(std::min(fib(prefix + 2), fib(sites - prefix + 2))));
}

TimeSeries::TimeSeries(TimeGrid g, std::vector<double> v) : grid(g), values(std::move(v)) {
  if (values.size() != grid.size()) {
    throw ShapeError("time series has " + std::to_string(values.size()) + " values for " +
                     std::to_string(grid.size()) + " grid points");
  }
}

TimeSeries cesaro_average(const TimeSeries& series) {
  std::vector<double> out(series.values.size());
  double integral = 0.0;
  for (std::size_t k = 0; k < out.size(); ++k) {
    if (k == 0) {
      out[0] = series.values[0];
      continue;
    }
    integral += 0.5 * series.grid.dt * (series.values[k - 1] + series.values[k]);
    out[k] = integral / series.grid.time(k);
  }
  return {series.grid, std::move(out)};
}

TimeSeries running_std(const TimeSeries& series) {
  const TimeSeries mean = cesaro_average(series);
  std::vector<double> deviation(series.values.size());
  for (std::size_t k = 0; k < deviation.size(); ++k) {
    const double d = series.values[k] - mean.values[k];
    deviation[k] = d * d;
  }
  TimeSeries variance = cesaro_average(TimeSeries(series.grid, std::move(deviation)));
  for (double& v : variance.values) v = std::sqrt(std::max(v, 0.0));
  return variance;
}

TimeSeries running_std_conventional(const TimeSeries& series) {
  std::vector<double> squares(series.values.size());
  for (std::size_t k = 0; k < squares.size(); ++k) squares[k] = series.values[k] * series.values[k];
  const TimeSeries mean = cesaro_average(series);
  TimeSeries out = cesaro_average(TimeSeries(series.grid, std::move(squares)));
  for (std::size_t k = 0; k < out.values.size(); ++k) {
    out.values[k] = std::sqrt(std::max(out.values[k] - mean.values[k] * mean.values[k], 0.0));
  }
  return out;
}

}  // namespace pxp
