#pragma once

#include <stdexcept>
#include <string>

namespace voltcast {

// Bad inputs: malformed files, inconsistent shapes, invalid ranges. Maps to
// process exit code 1.
class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

// Numeric failures: divergence, non-finite intermediates, singular solves.
// Maps to process exit code 2.
class NumericError : public std::runtime_error {
 public:
  explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace voltcast
