#pragma once

#include <stdexcept>
#include <string>

namespace mdlvq {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Caller supplied something outside an operation's preconditions.
class InputError : public Error {
 public:
  using Error::Error;
};

/// An internal invariant failed while building a structure.
class ConstructionError : public Error {
 public:
  using Error::Error;
};

/// A nearest-point tie was found where a clean sublattice was required.
class NotCleanError : public ConstructionError {
 public:
  using ConstructionError::ConstructionError;
};

/// An enumeration exceeded its configured cap.
class ResourceError : public Error {
 public:
  using Error::Error;
};

/// A description index pair that no labeling entry produces.
class CorruptionError : public Error {
 public:
  using Error::Error;
};

/// Operation requested on a structure that lacks the required part.
class UnsupportedError : public Error {
 public:
  using Error::Error;
};

}  // namespace mdlvq
