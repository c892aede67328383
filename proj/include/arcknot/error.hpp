#pragma once

#include <stdexcept>
#include <string>

namespace arcknot {

// Caller supplied invalid input: bad configuration, violated precondition.
class PreconditionError : public std::invalid_argument {
 public:
  explicit PreconditionError(const std::string& what) : std::invalid_argument(what) {}
};

// A computation on valid input could not produce a trustworthy result
// (degenerate geometry, quadrature breakdown, failed refinement).
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace arcknot
