#pragma once

#include <stdexcept>
#include <string>

namespace levytandem {

// Invalid model, tandem, or run parameters. CLI maps this to exit code 2.
class ParameterError : public std::invalid_argument {
 public:
  explicit ParameterError(const std::string& what) : std::invalid_argument(what) {}
};

// Argument outside the mathematical domain of an operation (pole, branch cut,
// non-finite result). Treated as a validation failure by the CLI (exit 2).
class DomainError : public ParameterError {
 public:
  explicit DomainError(const std::string& what) : ParameterError(what) {}
};

// Algorithmic failure: divergent iteration, unmet accuracy, bad convergence.
// CLI maps this to exit code 3.
class NumericError : public std::runtime_error {
 public:
  explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace levytandem
