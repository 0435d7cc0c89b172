#pragma once

#include <stdexcept>
#include <string>

namespace abelroot {

// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed group structures, non-prime factors, out-of-range coordinates.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// Operands belong to different groups, or vectors have the wrong length.
class StructureMismatch : public Error {
 public:
  using Error::Error;
};

// An algorithm was called outside its documented preconditions, or an
// internal invariant that the preconditions guarantee did not hold.
class PreconditionViolation : public Error {
 public:
  using Error::Error;
};

// A postcondition the library guarantees did not hold. Always a bug.
class InternalError : public Error {
 public:
  using Error::Error;
};

// The brute-force oracle was asked to enumerate more than its budget allows.
class BudgetExceeded : public Error {
 public:
  using Error::Error;
};

}  // namespace abelroot
