#pragma once

#include <stdexcept>
#include <string>

namespace cvdg {

// Thrown when vectors/matrices do not share the expected phase-space dimension.
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A vector that must represent a mode is not normalised.
class NotNormalisedError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A covariance matrix violates the uncertainty relation, or a matrix that
// must be symmetric/symplectic/orthogonal is not.
class InvalidStateError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class SingularMatrixError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Photon subtraction from a mode with (numerically) zero mean photon number.
class VacuumSubtractionError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class DegenerateNoiseError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// The closed-form paths assume a non-displaced base state.
class DisplacedStateError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Combinatorial size guard exceeded.
class GuardError : public std::length_error {
 public:
  using std::length_error::length_error;
};

// Fock truncation lost more probability than allowed.
class CutoffError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace cvdg
