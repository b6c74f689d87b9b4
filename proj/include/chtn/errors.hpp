#pragma once

#include <stdexcept>
#include <string>

namespace chtn {

// Invalid configuration or missing/extra boundary data.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Argument outside the mathematical domain of an operation (log of a
// non-positive value, negative area, non-positive tolerance).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Vector/operator dimension mismatch.
class ShapeError : public std::length_error {
 public:
  using std::length_error::length_error;
};

class IndexError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

// Explicit time stepping diverged.
class InstabilityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Operation not defined for the network mode (e.g. tree mode closed form).
class UnsupportedModeError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace chtn
