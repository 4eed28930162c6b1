#pragma once

#include <complex>
#include <cstddef>
#include <optional>
#include <string_view>
#include <vector>

#include "pxp/basis.hpp"
#include "pxp/propagator.hpp"
#include "pxp/states.hpp"

namespace pxp {

/// Energies E_n (ascending) with weights |<E_n|psi0>|^2.
struct OverlapSpectrum {
  std::vector<double> energies;
  std::vector<double> weights;

  std::size_t size() const noexcept { return energies.size(); }
  double total_weight() const;
};

OverlapSpectrum overlaps(const EigenDecomposition<double>& eig, const StateVector& psi0);

/// nu(t) = sum_n w_n exp(-i E_n t); |nu(t)|^2 is the global fidelity.
std::complex<double> survival_amplitude(const OverlapSpectrum& spectrum, double t);

/// Infinite-time average of |nu(t)|^2: sum over energy classes of (class weight)^2.
/// Consecutive energies closer than `deg_tol` share a class.
double longtime_average(const OverlapSpectrum& spectrum, double deg_tol);

/// 1e-8 times the spectral width (the PXP chain has an exactly degenerate E = 0 manifold).
double default_degeneracy_tol(const EigenDecomposition<double>& eig);

enum class ScarStrategy { overlap_greedy, band };

std::string_view to_string(ScarStrategy strategy);
ScarStrategy parse_scar_strategy(std::string_view name);

/// Scar states, one per selected energy class. A class of degenerate eigenvalues
/// (consecutive gaps <= deg_tol) contributes the normalized projection of |Z2>
/// onto its eigenspace, so the result does not depend on the arbitrary basis the
/// eigensolver picks inside a degenerate manifold.
struct ScarSet {
  std::vector<std::size_t> indices;      // first eigenstate ordinal of each class, ascending in energy
  std::vector<std::size_t> class_sizes;  // 1 for a nondegenerate level
  std::vector<double> energies;
  std::vector<double> neel_overlaps;  // |<Z2|S_n>|^2, the Z2 weight of the class
  std::vector<double> entropies;      // half-chain entanglement entropy of S_n
  Eigen::MatrixXd states;             // column n is S_n
};

struct ScarOptions {
  std::size_t count = 0;  // 0 selects L + 1
  ScarStrategy strategy = ScarStrategy::overlap_greedy;
  double min_energy_gap = 0.5;  // overlap_greedy: minimal separation between picked states
  std::optional<double> deg_tol = std::nullopt;  // unset: default_degeneracy_tol(eig)
};

/// Selects scar states by their overlap with |Z2>.
///
/// overlap_greedy visits energy classes by decreasing Z2 weight and keeps a class when
/// its energy is at least `min_energy_gap` away from every class already kept.
/// band splits [E_min, E_max] into `count` equal bands and keeps the maximal-weight
/// class of each. Throws NumericalError when fewer than `count` states qualify.
ScarSet identify_scars(const EigenDecomposition<double>& eig, const BlockadedBasis& basis,
                       const ScarOptions& options = {});

/// sum over scars of |<S_n|psi0>|^4, a lower bound on longtime_average with the same deg_tol.
double scar_bound(const ScarSet& scars, const EigenDecomposition<double>& eig, const StateVector& psi0);

/// Half-chain entropy of every eigenvector (L even: prefix L/2; odd: floor(L/2)).
std::vector<double> eigenstate_entropies(const EigenDecomposition<double>& eig, const BlockadedBasis& basis);

}  // namespace pxp
