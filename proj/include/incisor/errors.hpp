#pragma once

#include <stdexcept>
#include <string>

namespace incisor {

/// Invalid user input (bad geometry parameters, malformed options).
/// Maps to CLI exit code 2.
class ValidationError : public std::invalid_argument {
public:
  explicit ValidationError(const std::string& what) : std::invalid_argument(what) {}
};

/// Numerical failure (factorization breakdown, non-convergence).
/// Maps to CLI exit code 3.
class SolverError : public std::runtime_error {
public:
  explicit SolverError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace incisor
