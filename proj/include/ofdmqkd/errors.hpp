#pragma once

#include <stdexcept>
#include <string>

namespace ofdmqkd {

/// Root of every error the library throws.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid input: out-of-domain arguments, malformed files, schema violations.
class ValidationError : public Error {
 public:
  using Error::Error;
};

class DomainError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class RangeError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class ParseError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class IoError : public Error {
 public:
  using Error::Error;
};

/// A covariance matrix or entropy left the physical region beyond tolerance.
class PhysicalityError : public Error {
 public:
  using Error::Error;
};

}  // namespace ofdmqkd
