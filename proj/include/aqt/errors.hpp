#pragma once

#include <stdexcept>
#include <string>

namespace aqt {

class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Duplicate, unknown or colliding qubit label.
class LabelError : public Error {
  public:
    using Error::Error;
};

/// An operation was invoked in a state it does not accept.
class PreconditionError : public Error {
  public:
    using Error::Error;
};

/// Projection left a (numerically) empty branch.
class MeasurementError : public Error {
  public:
    using Error::Error;
};

/// Bad command-line input.
class UsageError : public Error {
  public:
    using Error::Error;
};

}  // namespace aqt
