#pragma once

#include <stdexcept>

namespace pdm {

// Input or configuration violates a documented contract. The CLI maps this to
// exit code 1; any other exception is a runtime failure (exit code 2).
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace pdm
