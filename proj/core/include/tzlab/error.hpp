#pragma once

#include <stdexcept>
#include <string>

namespace tzlab {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised when an operation's documented input bound is exceeded
/// (exhaustive enumeration over too many inputs and similar).
class BoundError : public Error {
 public:
  using Error::Error;
};

/// Raised when two artifacts that must share an interface do not
/// (PI/PO mismatch, pattern width mismatch, workload mismatch).
class InterfaceError : public Error {
 public:
  using Error::Error;
};

}  // namespace tzlab
