#pragma once

#include <stdexcept>
#include <string>

namespace specemd {

/// Base class for every error raised by the toolkit.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or out-of-contract input data (files, matrices, labels).
class InputError : public Error {
 public:
  using Error::Error;
};

/// A caller violated an operation's precondition.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// A numerical routine failed to converge. Indicates a defect, not bad data.
class ConvergenceError : public Error {
 public:
  using Error::Error;
};

/// Kernel matrix has a negative eigenvalue beyond round-off.
class NotPositiveSemidefinite : public Error {
 public:
  NotPositiveSemidefinite(const std::string& what, double min_eigenvalue)
      : Error(what), min_eigenvalue_(min_eigenvalue) {}
  double min_eigenvalue() const noexcept { return min_eigenvalue_; }

 private:
  double min_eigenvalue_;
};

}  // namespace specemd
