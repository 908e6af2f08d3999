#pragma once

#include <stdexcept>
#include <string>

namespace mlmarket {

// Base class for all library errors. Subclasses map onto CLI exit codes:
// validation/usage/domain/parse -> 2, convergence -> 3, io -> 4.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// Invalid inputs: bad vectors, bad configuration, violated preconditions.
class ValidationError : public Error {
  public:
    using Error::Error;
};

// Math-domain violations (zero costs where positivity is required, etc).
class DomainError : public ValidationError {
  public:
    using ValidationError::ValidationError;
};

// An operation applied to a market it does not support.
class UsageError : public ValidationError {
  public:
    using ValidationError::ValidationError;
};

// Malformed file content (belief files, config files, CSV).
class ParseError : public ValidationError {
  public:
    using ValidationError::ValidationError;
};

// Unreadable or unwritable files.
class IoError : public Error {
  public:
    using Error::Error;
};

// An iterative solve did not reach its tolerance.
class ConvergenceError : public Error {
  public:
    using Error::Error;
};

}  // namespace mlmarket
