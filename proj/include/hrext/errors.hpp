#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace hrext {

// Argument outside the mathematical domain of an operation (n < 2, lambda^2 > 2 ln n, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// An explicit correlation model whose block-Toeplitz matrix is not positive definite.
class ModelError : public std::runtime_error {
 public:
  ModelError(const std::string& what, std::int64_t failing_minor)
      : std::runtime_error(what + " (leading minor " + std::to_string(failing_minor) + ")"),
        failing_minor_(failing_minor) {}

  // 1-based order of the first leading principal minor that is not positive.
  std::int64_t failing_minor() const noexcept { return failing_minor_; }

 private:
  std::int64_t failing_minor_;
};

}  // namespace hrext
