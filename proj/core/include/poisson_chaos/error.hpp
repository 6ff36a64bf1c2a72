#pragma once

#include <stdexcept>
#include <string>

namespace poisson_chaos {

// Configuration that cannot describe a finite Poisson model (nonfinite
// horizon, negative weights, unresolvable cell membership, ...).
class InvalidConfiguration : public std::invalid_argument {
 public:
  explicit InvalidConfiguration(const std::string& what) : std::invalid_argument(what) {}
};

class InvalidArgument : public std::invalid_argument {
 public:
  explicit InvalidArgument(const std::string& what) : std::invalid_argument(what) {}
};

class RangeError : public std::out_of_range {
 public:
  explicit RangeError(const std::string& what) : std::out_of_range(what) {}
};

class DomainError : public std::domain_error {
 public:
  explicit DomainError(const std::string& what) : std::domain_error(what) {}
};

// Instance exceeds one of the documented enumeration / memory caps.
class SizeError : public std::length_error {
 public:
  explicit SizeError(const std::string& what) : std::length_error(what) {}
};

// An exact identity failed beyond its stated tolerance.
class IdentityViolation : public std::runtime_error {
 public:
  explicit IdentityViolation(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace poisson_chaos
