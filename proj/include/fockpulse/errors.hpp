#pragma once

#include <stdexcept>
#include <string>

namespace fockpulse {

// Root of every failure the library reports.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidDimension : public Error {
 public:
  using Error::Error;
};

// Zero-norm or otherwise unusable state.
class InvalidState : public Error {
 public:
  using Error::Error;
};

// A documented precondition was violated by the caller (non-Hermitian
// Hamiltonian, negative duration, unsorted sweep ratios, ...).
class ContractViolation : public Error {
 public:
  using Error::Error;
};

class InternalConsistency : public Error {
 public:
  using Error::Error;
};

// Fixed-step integration drifted beyond its tolerance.
class IntegrationResolution : public Error {
 public:
  using Error::Error;
};

class NormalizationError : public Error {
 public:
  NormalizationError(const std::string& what, double deviation)
      : Error(what), deviation_(deviation) {}

  // Signed 1 - sum |c|^2 of the offending coefficient list.
  double deviation() const { return deviation_; }

 private:
  double deviation_;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

}  // namespace fockpulse
