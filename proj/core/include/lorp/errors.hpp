#pragma once

#include <stdexcept>
#include <string>

namespace lorp {

/// A caller violated an operation's documented precondition.
class precondition_error : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A snapshot references entities that do not exist or are inconsistent.
class malformed_snapshot : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A file could not be decoded. The message names the line or field.
class parse_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace lorp
