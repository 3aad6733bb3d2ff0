#pragma once

#include <stdexcept>
#include <string>

namespace pickplace {

// Base class for every error raised by this library. Input or contract
// violations throw one of the subclasses below; callers that want a single
// catch point can catch Error.
class Error : public std::runtime_error {
public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Tensor shape mismatch, indivisible spatial dims, bad axis, etc.
class DimensionError : public Error {
public:
  using Error::Error;
};

// API precondition violated (wrong call order, invalid enum value, list
// length mismatch, backward() on a non-scalar, ...).
class ContractError : public Error {
public:
  using Error::Error;
};

// NaN or Inf encountered where finite values are required.
class NumericError : public Error {
public:
  using Error::Error;
};

// Out-of-range element access.
class IndexError : public Error {
public:
  using Error::Error;
};

// Scalar argument outside its documented range.
class RangeError : public Error {
public:
  using Error::Error;
};

// Rejection sampling exhausted its attempt budget.
class SamplingError : public Error {
public:
  using Error::Error;
};

// File or stream could not be read/written/parsed.
class IoError : public Error {
public:
  using Error::Error;
};

}  // namespace pickplace
