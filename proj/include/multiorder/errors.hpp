#pragma once

#include <stdexcept>
#include <string>

namespace multiorder {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class BasisMismatch : public Error {
 public:
  BasisMismatch() : Error("field scalars are over different radical bases") {}
};

class RankMismatch : public Error {
 public:
  RankMismatch(std::size_t expected, std::size_t got)
      : Error("rank mismatch: expected " + std::to_string(expected) + ", got " +
              std::to_string(got)) {}
};

/// Interval evaluation did not separate a nonzero value from zero before the
/// configured precision cap. For field elements this indicates a bug.
class PrecisionCapExceeded : public Error {
 public:
  explicit PrecisionCapExceeded(unsigned cap)
      : Error("sign determination exceeded precision cap of " + std::to_string(cap) +
              " bits") {}
};

class DivisionByZero : public Error {
 public:
  DivisionByZero() : Error("division by zero field element") {}
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// A search ran out of its configured budget (probes, boxes, retries).
class BudgetExhausted : public Error {
 public:
  using Error::Error;
};

class NotDense : public Error {
 public:
  NotDense() : Error("order is not dense") {}
};

class NoCertificateFound : public Error {
 public:
  using Error::Error;
};

class MalformedInput : public Error {
 public:
  using Error::Error;
};

}  // namespace multiorder
