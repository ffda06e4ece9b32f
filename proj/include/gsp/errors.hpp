#pragma once

#include <stdexcept>
#include <string>

namespace gsp {

/// Invalid input: bad parameters, malformed files, violated preconditions.
class validation_error : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Numerical failure: non-convergence, divergence, non-finite values.
class numerical_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace gsp
