#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace nlsg {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

/// An argument lies outside the admissible range of an operation
/// (nonpositive epsilon, step beyond the range-condition bound, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

class ResolventFailure : public Error {
 public:
  using Error::Error;
};

/// Raised when an evaluation would need more resolvent steps than allowed,
/// or when floating-point drift would eat the requested accuracy.
class BudgetExceeded : public Error {
 public:
  BudgetExceeded(const std::string& what, std::uint64_t required_steps)
      : Error(what), required_steps_(required_steps) {}

  std::uint64_t required_steps() const noexcept { return required_steps_; }

 private:
  std::uint64_t required_steps_;
};

class Unsupported : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace nlsg
