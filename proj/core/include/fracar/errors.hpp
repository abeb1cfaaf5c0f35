#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace fracar {

// Argument outside the mathematical domain of an operation (delta not in (0,1),
// negative density, alpha not in (0,1], ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Malformed or out-of-range configuration. The message carries the key path.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Broken internal bookkeeping, e.g. a history buffer whose length does not match
// the grid it is applied to.
class InvariantViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// The explicit update produced a non-finite value.
class SolverAbort : public std::runtime_error {
 public:
  SolverAbort(const std::string& what, std::size_t step, std::size_t cell)
      : std::runtime_error(what), step_(step), cell_(cell) {}

  std::size_t step() const noexcept { return step_; }
  std::size_t cell() const noexcept { return cell_; }

 private:
  std::size_t step_;
  std::size_t cell_;
};

}  // namespace fracar
