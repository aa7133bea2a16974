#pragma once

#include <stdexcept>
#include <string>

namespace specsurf {

// Invalid inputs and violated preconditions. CLI maps these to exit code 1.
struct ValidationError : std::runtime_error {
  explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

// Solver breakdowns and non-convergence. CLI maps these to exit code 2.
struct NumericalError : std::runtime_error {
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace specsurf
