#pragma once

#include <stdexcept>
#include <string>

namespace pirogue {

/// Bad input: missing files, malformed rasters, out-of-range config values.
/// Maps to CLI exit code 1.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A runtime invariant of the simulation was broken. Maps to CLI exit code 2.
class InvariantError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace pirogue
