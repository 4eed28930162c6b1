#pragma once

#include <stdexcept>
#include <string>

namespace pxp {

// Argument outside the admissible range (site index, L, prefix length, ...).
class RangeError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

// Vector/matrix dimensions that do not belong to the same basis.
class ShapeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Request exceeds a configured size limit (dense matrices, full diagonalization).
class CapacityError : public std::length_error {
 public:
  using std::length_error::length_error;
};

// Iterative method failed or a numerical invariant was violated.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Input outside the mathematical domain (e.g. non-PSD density matrix).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Valid inputs that describe a configuration the library does not model.
class UnsupportedError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace pxp
