#pragma once

#include <stdexcept>
#include <string>

namespace invkit {

// Base class for everything this library throws on purpose. The CLI maps any
// InvkitError to exit code 3 with a one-line message on stderr.
class InvkitError : public std::runtime_error {
 public:
  explicit InvkitError(const std::string& what) : std::runtime_error(what) {}
};

class DimensionMismatchError : public InvkitError {
 public:
  using InvkitError::InvkitError;
};

class NotSymmetricError : public InvkitError {
 public:
  using InvkitError::InvkitError;
};

class NoConvergenceError : public InvkitError {
 public:
  using InvkitError::InvkitError;
};

class SingularError : public InvkitError {
 public:
  using InvkitError::InvkitError;
};

class OverflowError : public InvkitError {
 public:
  using InvkitError::InvkitError;
};

class WrongInertiaError : public InvkitError {
 public:
  using InvkitError::InvkitError;
};

class NotOnBoundaryError : public InvkitError {
 public:
  using InvkitError::InvkitError;
};

class DegenerateSetError : public InvkitError {
 public:
  using InvkitError::InvkitError;
};

class NumericalBreakdownError : public InvkitError {
 public:
  using InvkitError::InvkitError;
};

class ParseError : public InvkitError {
 public:
  using InvkitError::InvkitError;
};

class SchemaError : public InvkitError {
 public:
  using InvkitError::InvkitError;
};

class ValidationError : public InvkitError {
 public:
  using InvkitError::InvkitError;
};

}  // namespace invkit
