#pragma once

#include <stdexcept>
#include <string>

namespace ffd {

// Mathematically invalid input: non-prime level counts, degenerate generators,
// levels out of range, mismatched shapes.
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A configured size or evaluation cap would be exceeded.
class CapExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed files: design text files, catalogs.
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A file could not be opened, read or written.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace ffd
