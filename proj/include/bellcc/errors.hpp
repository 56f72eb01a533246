#pragma once

#include <stdexcept>
#include <string>

namespace bellcc {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed or inconsistent input data (bad file, dimension mismatch,
// invalid functional).
class InputError : public Error {
 public:
  using Error::Error;
};

// Parameters that are well-formed but cannot be served: enumeration caps,
// impossible dimensions.
class InfeasibleError : public Error {
 public:
  using Error::Error;
};

// Numerical breakdown inside an iterative solver.
class NumericalError : public Error {
 public:
  using Error::Error;
};

// Raised when Alice's local marginals are not uniform and a construction
// relies on them being so.
class UniformMarginalError : public InputError {
 public:
  UniformMarginalError(const std::string& what, double deviation)
      : InputError(what), deviation_(deviation) {}
  double deviation() const { return deviation_; }

 private:
  double deviation_;
};

}  // namespace bellcc
