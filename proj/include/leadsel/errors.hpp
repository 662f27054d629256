#pragma once

#include <stdexcept>
#include <string>

namespace leadsel {

/// Invalid sizes, counts, or out-of-range arguments.
class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A grounded system whose follower block cannot be solved or is empty.
class GroundingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// File could not be opened, read, or written.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace leadsel
