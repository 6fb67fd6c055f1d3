#pragma once

#include <stdexcept>
#include <string>

namespace spectral {

/// Base class of every error raised by the engine. All of them signal either
/// bad input or a violated mathematical guarantee; none are recoverable
/// inside a computation.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ArityError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

// Antiderivative would need a logarithm.
class LogTermError : public Error {
 public:
  using Error::Error;
};

class RemainderError : public Error {
 public:
  using Error::Error;
};

class NonExpandableError : public Error {
 public:
  using Error::Error;
};

class ShapeError : public Error {
 public:
  using Error::Error;
};

class OddPowerOfCError : public Error {
 public:
  using Error::Error;
};

class StabilityError : public Error {
 public:
  using Error::Error;
};

class InvariantViolation : public Error {
 public:
  using Error::Error;
};

class IncompleteError : public Error {
 public:
  using Error::Error;
};

class MismatchError : public Error {
 public:
  using Error::Error;
};

}  // namespace spectral
