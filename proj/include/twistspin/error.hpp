#pragma once

#include <stdexcept>
#include <string>

namespace twistspin {

enum class ErrorKind {
  kValidation = 1,
  kGenericity = 2,
  kIo = 3,
};

/// Base error for the pipeline. The kind maps onto CLI exit codes.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

class ValidationError : public Error {
 public:
  explicit ValidationError(const std::string& what) : Error(ErrorKind::kValidation, what) {}
};

class GenericityError : public Error {
 public:
  explicit GenericityError(const std::string& what) : Error(ErrorKind::kGenericity, what) {}
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& what) : Error(ErrorKind::kIo, what) {}
};

}  // namespace twistspin
