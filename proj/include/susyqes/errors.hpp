#pragma once

#include <stdexcept>
#include <string>

namespace susyqes {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A requested size exceeds a configured maximum.
class CapacityError : public Error {
 public:
  using Error::Error;
};

/// Floating-point overflow while evaluating a closed form.
class RangeError : public Error {
 public:
  RangeError(const std::string& what, double threshold)
      : Error(what), threshold_(threshold) {}
  double threshold() const noexcept { return threshold_; }

 private:
  double threshold_;
};

/// Evaluation at a point where the function is not defined.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Invalid parameters or malformed input data.
class InputError : public Error {
 public:
  using Error::Error;
};

/// A construction precondition (admissibility, unbroken SUSY) was violated.
class ConstructionError : public Error {
 public:
  using Error::Error;
};

/// An iterative or adaptive numerical method failed to converge.
class NumericalError : public Error {
 public:
  NumericalError(const std::string& what, double achieved)
      : Error(what), achieved_(achieved) {}
  double achieved() const noexcept { return achieved_; }

 private:
  double achieved_;
};

}  // namespace susyqes
