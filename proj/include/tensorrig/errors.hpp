#pragma once

#include <stdexcept>

namespace tensorrig {

/// Malformed input file or configuration.
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A computation was refused because the instance exceeds a documented
/// size limit.
class GuardViolation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace tensorrig
