#pragma once

#include <stdexcept>
#include <string>

namespace rotorlab {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// A graph family or builder was given parameters it cannot realize.
class InvalidParameters : public Error {
  public:
    using Error::Error;
};

/// A builder was applied to a graph of the wrong family.
class WrongFamily : public Error {
  public:
    using Error::Error;
};

/// Torus builder given an even side length.
class EvenSide : public WrongFamily {
  public:
    using WrongFamily::WrongFamily;
};

class GraphTooSmall : public Error {
  public:
    using Error::Error;
};

class DivisibilityError : public Error {
  public:
    using Error::Error;
};

class SingularSystem : public Error {
  public:
    using Error::Error;
};

class NonConvergent : public Error {
  public:
    using Error::Error;
};

class DimensionMismatch : public Error {
  public:
    using Error::Error;
};

/// The rotor configuration does not realize the chain the analytics were computed on.
class ChainMismatch : public Error {
  public:
    using Error::Error;
};

class ParseError : public Error {
  public:
    using Error::Error;
};

class IoError : public Error {
  public:
    using Error::Error;
};

}  // namespace rotorlab
