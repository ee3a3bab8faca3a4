#pragma once

#include <stdexcept>
#include <string>

namespace entmom {

/// Argument outside the mathematical domain of an operation. The message
/// names the violated constraint.
class domain_error : public std::domain_error {
 public:
  explicit domain_error(const std::string& what) : std::domain_error(what) {}
};

/// A numerical procedure failed to produce a value (vanishing denominator,
/// non-convergence).
class numerical_error : public std::runtime_error {
 public:
  explicit numerical_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace entmom
