#include "pxp/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "pxp/errors.hpp"
#include "pxp/observables.hpp"

namespace pxp {

double OverlapSpectrum::total_weight() const { return std::accumulate(weights.begin(), weights.end(), 0.0); }

OverlapSpectrum overlaps(const EigenDecomposition<double>& eig, const StateVector& psi0) {
  if (psi0.size() != eig.size()) {
    throw ShapeError("overlaps: state length " + std::to_string(psi0.size()) + " vs spectrum size " +
                     std::to_string(eig.size()));
  }
  const Eigen::VectorXd re = eig.vectors.transpose() * psi0.real();
  const Eigen::VectorXd im = eig.vectors.transpose() * psi0.imag();
  OverlapSpectrum out;
  out.energies.assign(eig.energies.data(), eig.energies.data() + eig.size());
  out.weights.resize(static_cast<std::size_t>(eig.size()));
  for (Eigen::Index n = 0; n < re.size(); ++n) out.weights[static_cast<std::size_t>(n)] = re(n) * re(n) + im(n) * im(n);
  return out;
}

std::complex<double> survival_amplitude(const OverlapSpectrum& spectrum, double t) {
  std::complex<double> nu = 0.0;
  for (std::size_t n = 0; n < spectrum.size(); ++n) nu += spectrum.weights[n] * std::polar(1.0, -spectrum.energies[n] * t);
  return nu;
}

double longtime_average(const OverlapSpectrum& spectrum, double deg_tol) {
  if (!(deg_tol >= 0.0)) throw RangeError("longtime_average: degeneracy tolerance must be non-negative");
  double total = 0.0;
  double class_weight = 0.0;
  for (std::size_t n = 0; n < spectrum.size(); ++n) {
    if (n > 0 && spectrum.energies[n] - spectrum.energies[n - 1] > deg_tol) {
      total += class_weight * class_weight;
      class_weight = 0.0;
    }
    class_weight += spectrum.weights[n];
  }
  return total + class_weight * class_weight;
}

double default_degeneracy_tol(const EigenDecomposition<double>& eig) {
  if (eig.size() == 0) return 0.0;
  return 1e-8 * (eig.energies(eig.size() - 1) - eig.energies(0));
}

std::string_view to_string(ScarStrategy strategy) {
  return strategy == ScarStrategy::band ? "band" : "overlap-greedy";
}

ScarStrategy parse_scar_strategy(std::string_view name) {
  if (name == "overlap-greedy") return ScarStrategy::overlap_greedy;
  if (name == "band") return ScarStrategy::band;
  throw UnsupportedError("unknown scar strategy '" + std::string(name) + "'");
}

std::vector<double> eigenstate_entropies(const EigenDecomposition<double>& eig, const BlockadedBasis& basis) {
  if (basis.sites() < 2) return std::vector<double>(static_cast<std::size_t>(eig.size()), 0.0);
  const BipartitionMap map = bipartition(basis, basis.sites() / 2);
  std::vector<double> out(static_cast<std::size_t>(eig.size()));
  for (Eigen::Index n = 0; n < eig.size(); ++n) {
    out[static_cast<std::size_t>(n)] = entanglement_entropy(map, eig.vectors.col(n).cast<std::complex<double>>());
  }
  return out;
}

ScarSet identify_scars(const EigenDecomposition<double>& eig, const BlockadedBasis& basis,
                       const ScarOptions& options) {
  if (static_cast<std::size_t>(eig.size()) != basis.size()) throw ShapeError("identify_scars: basis/spectrum mismatch");
  const double deg_tol = options.deg_tol.value_or(default_degeneracy_tol(eig));
  if (!(deg_tol >= 0.0)) throw RangeError("identify_scars: degeneracy tolerance must be non-negative");
  const std::size_t count = options.count == 0 ? static_cast<std::size_t>(basis.sites() + 1) : options.count;
  const auto n = static_cast<std::size_t>(eig.size());
  const Index neel = basis.index_of(sublattice_pattern(basis.sites(), 1));

  // Energy classes [first, last) with their Z2 weight and mean energy.
  struct EnergyClass {
    std::size_t first, last;
    double weight = 0.0;
    double energy = 0.0;
  };
  std::vector<EnergyClass> classes;
  for (std::size_t k = 0; k < n; ++k) {
    const double e = eig.energies(static_cast<Eigen::Index>(k));
    if (classes.empty() || e - eig.energies(static_cast<Eigen::Index>(k - 1)) > deg_tol) classes.push_back({k, k});
    EnergyClass& c = classes.back();
    const double amp = eig.vectors(neel, static_cast<Eigen::Index>(k));
    c.last = k + 1;
    c.weight += amp * amp;
    c.energy += e;
  }
  for (auto& c : classes) c.energy /= static_cast<double>(c.last - c.first);

  std::vector<std::size_t> picked;
  if (options.strategy == ScarStrategy::overlap_greedy) {
    std::vector<std::size_t> order(classes.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return classes[a].weight > classes[b].weight; });
    for (std::size_t k : order) {
      if (picked.size() == count) break;
      const bool separated = std::all_of(picked.begin(), picked.end(), [&](std::size_t p) {
        return std::abs(classes[p].energy - classes[k].energy) >= options.min_energy_gap;
      });
      if (separated) picked.push_back(k);
    }
  } else {
    const double lo = eig.energies(0);
    const double hi = eig.energies(static_cast<Eigen::Index>(n - 1));
    const double width = (hi - lo) / static_cast<double>(count);
    std::vector<std::ptrdiff_t> best(count, -1);
    for (std::size_t k = 0; k < classes.size(); ++k) {
      auto band = width > 0.0 ? static_cast<std::size_t>((classes[k].energy - lo) / width) : 0;
      band = std::min(band, count - 1);
      if (best[band] < 0 || classes[k].weight > classes[static_cast<std::size_t>(best[band])].weight) {
        best[band] = static_cast<std::ptrdiff_t>(k);
      }
    }
    for (auto b : best) {
      if (b >= 0) picked.push_back(static_cast<std::size_t>(b));
    }
  }
  if (picked.size() < count) {
    throw NumericalError("identify_scars: only " + std::to_string(picked.size()) + " of " + std::to_string(count) +
                         " scar candidates satisfy the " + std::string(to_string(options.strategy)) + " criterion");
  }
  std::sort(picked.begin(), picked.end());

  ScarSet scars;
  scars.states.resize(eig.size(), static_cast<Eigen::Index>(picked.size()));
  const BipartitionMap map = bipartition(basis, std::max(1, basis.sites() / 2));
  for (std::size_t i = 0; i < picked.size(); ++i) {
    const EnergyClass& c = classes[picked[i]];
    const auto first = static_cast<Eigen::Index>(c.first);
    const auto size = static_cast<Eigen::Index>(c.last - c.first);
    Eigen::VectorXd state;
    if (size == 1) {
      state = eig.vectors.col(first);
    } else {
      const auto block = eig.vectors.middleCols(first, size);
      state = block * block.row(neel).transpose();
      state.normalize();
    }
    scars.indices.push_back(c.first);
    scars.class_sizes.push_back(c.last - c.first);
    scars.energies.push_back(c.energy);
    scars.neel_overlaps.push_back(c.weight);
    scars.entropies.push_back(entanglement_entropy(map, state.cast<std::complex<double>>()));
    scars.states.col(static_cast<Eigen::Index>(i)) = state;
  }
  return scars;
}

double scar_bound(const ScarSet& scars, const EigenDecomposition<double>& eig, const StateVector& psi0) {
  if (psi0.size() != eig.size() || scars.states.rows() != psi0.size()) {
    throw ShapeError("scar_bound: state length does not match spectrum");
  }
  const Eigen::VectorXd re = scars.states.transpose() * psi0.real();
  const Eigen::VectorXd im = scars.states.transpose() * psi0.imag();
  double bound = 0.0;
  for (Eigen::Index k = 0; k < re.size(); ++k) {
    const double w = re(k) * re(k) + im(k) * im(k);
    bound += w * w;
  }
  return bound;
}

}  // namespace pxp
