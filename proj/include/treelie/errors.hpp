#pragma once

#include <stdexcept>
#include <string>

namespace treelie {

// Bad user input: malformed trees, expressions, flags, unknown roots.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A desk-scale size limit was exceeded; the request itself is well formed.
class GuardError : public std::length_error {
 public:
  using std::length_error::length_error;
};

// A numerical routine failed to meet its tolerance.
class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace treelie
