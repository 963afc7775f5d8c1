#ifndef UWLOC_ERRORS_HPP
#define UWLOC_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace uwloc {

// Bad or inconsistent configuration (mismatched grids, invalid fields,
// unreadable input files). CLI maps this to exit code 2.
struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Argument outside the mathematical domain of an operation.
struct DomainError : std::runtime_error {
  explicit DomainError(const std::string& what) : std::runtime_error(what) {}
};

// Non-finite values, singular systems, failed quadrature refinement.
struct NumericError : std::runtime_error {
  explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

// A quantity violated a bound the model guarantees (used as a test signal).
struct ModelViolation : std::runtime_error {
  explicit ModelViolation(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace uwloc

#endif
