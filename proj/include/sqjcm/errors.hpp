#pragma once

#include <stdexcept>
#include <string>

namespace sqjcm {

// Inputs outside an operation's mathematical domain (exit code 3 in the CLI).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Fock-space truncation could not reach the requested tail tolerance (exit code 4).
class TruncationError : public std::runtime_error {
 public:
  TruncationError(const std::string& what, double tail_mass, int cutoff)
      : std::runtime_error(what), tail_mass_(tail_mass), cutoff_(cutoff) {}

  double tail_mass() const noexcept { return tail_mass_; }
  int cutoff() const noexcept { return cutoff_; }

 private:
  double tail_mass_;
  int cutoff_;
};

// A self-check inside a computation failed (non-Hermitian Gram matrix, negative spectrum, ...).
// Reported like a numeric-domain error.
class ConsistencyError : public DomainError {
 public:
  using DomainError::DomainError;
};

}  // namespace sqjcm
