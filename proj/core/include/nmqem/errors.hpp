#pragma once

#include <stdexcept>
#include <string>

namespace nmqem {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ShapeMismatch : public Error {
 public:
  using Error::Error;
};

/// Determinant below the relative threshold; for channels this means alpha
/// sits at (or numerically near) a root of the determinant polynomial.
class SingularMatrix : public Error {
 public:
  using Error::Error;
};

class NonConvergence : public Error {
 public:
  using Error::Error;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

class NonOrthonormalBasis : public Error {
 public:
  using Error::Error;
};

class AlphaOutOfRange : public Error {
 public:
  using Error::Error;
};

class NotNormalized : public Error {
 public:
  using Error::Error;
};

class DenominatorNearZero : public Error {
 public:
  using Error::Error;
};

/// Malformed input document. `what()` carries line/field context.
class ParseError : public Error {
 public:
  using Error::Error;
};

/// Well-formed document whose content violates the table schema.
class SchemaError : public Error {
 public:
  using Error::Error;
};

class EmptyRun : public Error {
 public:
  using Error::Error;
};

}  // namespace nmqem
