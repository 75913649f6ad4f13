#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace fair {

/// Argument outside the mathematical domain of an operation (empty seller
/// set, q = 0, malformed curve parameters).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A quantity violates a seller's availability.
class ConstraintError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Demand cannot be met by the available supply.
class InfeasibleError : public std::runtime_error {
 public:
  InfeasibleError(const std::string& what, std::int64_t shortfall)
      : std::runtime_error(what), shortfall_(shortfall) {}

  std::int64_t shortfall() const noexcept { return shortfall_; }

 private:
  std::int64_t shortfall_;
};

/// Operation not allowed in the fair's current lifecycle state.
class StateError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Malformed external input. `line` is 1-based, 0 when not line oriented.
class InputError : public std::runtime_error {
 public:
  InputError(const std::string& what, std::size_t line = 0)
      : std::runtime_error(line ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace fair
