#pragma once

#include <Eigen/Core>
#include <complex>
#include <string>
#include <string_view>

#include "pxp/basis.hpp"

namespace pxp {

using StateVector = Eigen::VectorXcd;

enum class StateKind { homogeneous, neel, neel_prime, theta_plus, theta_plus_prime, theta_symm, blockaded };

struct StateSpec {
  StateKind kind = StateKind::neel;
  double theta = 0.0;  // radians; used by the theta kinds only
};

std::string_view to_string(StateKind kind);
/// Accepts the names used by to_string; throws UnsupportedError otherwise.
StateKind parse_state_kind(std::string_view name);
bool uses_theta(StateKind kind) noexcept;

/// Builds the requested initial state in `basis` from closed-form amplitudes.
///
/// Site 1 is the least significant bit, so |Z2> = |1010...> (excited odd sites) is
/// the pattern with bits 0, 2, 4, ... set, and the theta kinds place their
/// cos(theta)|0> + sin(theta)|1> factors on odd sites (unprimed) or even sites (primed).
/// Theta kinds require even L. Throws NumericalError if the result is not unit norm
/// to 1e-12.
StateVector make_state(const BlockadedBasis& basis, const StateSpec& spec);

/// Pattern with every odd site (parity 1) or every even site (parity 0) excited.
Pattern sublattice_pattern(int sites, int parity);

/// <u|v>; throws ShapeError when the lengths differ.
std::complex<double> overlap(const StateVector& u, const StateVector& v);

}  // namespace pxp
