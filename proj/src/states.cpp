#include "pxp/states.hpp"

#include <array>
#include <bit>
#include <cmath>
#include <string>

#include "pxp/errors.hpp"

namespace pxp {

namespace {

constexpr std::array<std::pair<StateKind, std::string_view>, 7> kNames{{
    {StateKind::homogeneous, "homogeneous"},
    {StateKind::neel, "neel"},
    {StateKind::neel_prime, "neel_prime"},
    {StateKind::theta_plus, "theta_plus"},
    {StateKind::theta_plus_prime, "theta_plus_prime"},
    {StateKind::theta_symm, "theta_symm"},
    {StateKind::blockaded, "blockaded"},
}};

// Amplitudes of a product of cos(theta)|0> + sin(theta)|1> on the sites selected by
// `sublattice` and |0> elsewhere.
void add_theta_product(const BlockadedBasis& basis, Pattern sublattice, double theta, double scale,
                       StateVector& psi) {
  const int factors = std::popcount(sublattice);
  const double c = std::cos(theta), s = std::sin(theta);
  for (std::size_t i = 0; i < basis.size(); ++i) {
    const Pattern p = basis[i];
    if ((p & ~sublattice) != 0) continue;
    const int excited = std::popcount(p);
    psi(static_cast<Eigen::Index>(i)) += scale * std::pow(s, excited) * std::pow(c, factors - excited);
  }
}

}  // namespace

std::string_view to_string(StateKind kind) {
  for (const auto& [k, name] : kNames) {
    if (k == kind) return name;
  }
  return "unknown";
}

StateKind parse_state_kind(std::string_view name) {
  for (const auto& [k, n] : kNames) {
    if (n == name) return k;
  }
  throw UnsupportedError("unknown state kind '" + std::string(name) + "'");
}

bool uses_theta(StateKind kind) noexcept {
  return kind == StateKind::theta_plus || kind == StateKind::theta_plus_prime || kind == StateKind::theta_symm;
}

Pattern sublattice_pattern(int sites, int parity) {
  Pattern p = 0;
  // Odd sites j = 1, 3, ... are bits 0, 2, ...
  for (int j = (parity == 1 ? 1 : 2); j <= sites; j += 2) p |= Pattern{1} << (j - 1);
  return p;
}

StateVector make_state(const BlockadedBasis& basis, const StateSpec& spec) {
  const int L = basis.sites();
  const auto n = static_cast<Eigen::Index>(basis.size());
  StateVector psi = StateVector::Zero(n);

  if (uses_theta(spec.kind)) {
    if (L % 2 != 0) {
      throw UnsupportedError(std::string(to_string(spec.kind)) + " requires an even number of sites, got L = " +
                             std::to_string(L));
    }
    if (!std::isfinite(spec.theta)) throw UnsupportedError("theta must be finite");
  }

  switch (spec.kind) {
    case StateKind::homogeneous:
      psi(0) = 1.0;
      break;
    case StateKind::neel:
      psi(basis.index_of(sublattice_pattern(L, 1))) = 1.0;
      break;
    case StateKind::neel_prime:
      psi(basis.index_of(sublattice_pattern(L, 0))) = 1.0;
      break;
    case StateKind::theta_plus:
      add_theta_product(basis, sublattice_pattern(L, 1), spec.theta, 1.0, psi);
      break;
    case StateKind::theta_plus_prime:
      add_theta_product(basis, sublattice_pattern(L, 0), spec.theta, 1.0, psi);
      break;
    case StateKind::theta_symm: {
      const double scale = 1.0 / std::sqrt(2.0 * (1.0 + std::pow(std::cos(spec.theta), L)));
      add_theta_product(basis, sublattice_pattern(L, 1), spec.theta, scale, psi);
      add_theta_product(basis, sublattice_pattern(L, 0), spec.theta, scale, psi);
      break;
    }
    case StateKind::blockaded:
      psi.setConstant(1.0 / std::sqrt(static_cast<double>(basis.size())));
      break;
  }

  const double drift = std::abs(psi.norm() - 1.0);
  if (drift > 1e-12) {
    throw NumericalError(std::string(to_string(spec.kind)) + " state has norm error " + std::to_string(drift));
  }
  return psi;
}

std::complex<double> overlap(const StateVector& u, const StateVector& v) {
  if (u.size() != v.size()) {
    throw ShapeError("overlap: lengths " + std::to_string(u.size()) + " and " + std::to_string(v.size()) + " differ");
  }
  return u.dot(v);
}

}  // namespace pxp
