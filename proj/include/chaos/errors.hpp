#pragma once

#include <stdexcept>
#include <string>

namespace chaos {

/// Malformed or out-of-contract input (bad sizes, non-finite values, flavor
/// mismatch, missing fields).
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// An eigenvalue sits within cluster tolerance of two clusters.
class AmbiguityError : public std::runtime_error {
 public:
  AmbiguityError(const std::string& what, double value)
      : std::runtime_error(what), value_(value) {}
  double value() const noexcept { return value_; }

 private:
  double value_;
};

/// A linear system is numerically singular.
class ConditioningError : public std::runtime_error {
 public:
  ConditioningError(const std::string& what, double condition)
      : std::runtime_error(what), condition_(condition) {}
  double condition() const noexcept { return condition_; }

 private:
  double condition_;
};

}  // namespace chaos
