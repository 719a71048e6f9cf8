// Error types shared by all modules. Data problems (bad user input, files
// that do not parse) derive from DataError; conditions that indicate a bug
// or numerical breakdown inside the library derive from InternalError. The
// CLI maps the former to exit code 1 and the latter to exit code 2.

#pragma once

#include <stdexcept>
#include <string>

namespace ot {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DataError : public Error {
 public:
  using Error::Error;
};

class InternalError : public Error {
 public:
  using Error::Error;
};

// core
class NegativeMassError : public DataError {
 public:
  using DataError::DataError;
};
class NotNormalizedError : public DataError {
 public:
  using DataError::DataError;
};
class DimensionMismatchError : public DataError {
 public:
  using DataError::DataError;
};
class KTooLargeError : public DataError {
 public:
  using DataError::DataError;
};
class OutOfRangeError : public DataError {
 public:
  using DataError::DataError;
};

// partialid
class InfeasibleBoxError : public DataError {
 public:
  using DataError::DataError;
};
class InfeasibleEndpointError : public InternalError {
 public:
  using InternalError::InternalError;
};
class LpFailureError : public InternalError {
 public:
  using InternalError::InternalError;
};

// ingest / figures
class ParseError : public DataError {
 public:
  using DataError::DataError;
};
class OutOfRangeCategoryError : public DataError {
 public:
  using DataError::DataError;
};
class EmptyFileError : public DataError {
 public:
  using DataError::DataError;
};
class IoError : public DataError {
 public:
  using DataError::DataError;
};

}  // namespace ot
