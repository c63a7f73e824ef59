#pragma once

#include <stdexcept>
#include <string>

namespace polarize {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Malformed input text (JSON or maxcut files).
struct ParseError : Error {
  using Error::Error;
};

/// Structurally valid input that violates a domain invariant.
struct ValidationError : Error {
  using Error::Error;
};

/// Out-of-range or inconsistent configuration.
struct ConfigError : Error {
  using Error::Error;
};

}  // namespace polarize
