#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace dps {

enum class ErrorKind {
  Syntax,
  AtomicExpression,
  NotATuple,
  DuplicateVariable,
  ImproperOperand,
  NotAPermutation,
  FuelExhausted,
  DecreaseViolation,
  PrimitiveError,
  SortMismatch,
  SortError,
  IllFormedSpec,
  UnknownLemma,
  UnknownRelation,
  NotInitial,
  NotUnifiable,
  BadPath,
  NotSplittable,
  NotOrphan,
  StepFailed,
  NoFinalRow,
  Io,
};

const char* error_kind_name(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message);
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

// Raised by script replay; carries the 1-based command index and the
// kind of the underlying rule failure.
class StepFailed : public Error {
 public:
  StepFailed(std::size_t index, ErrorKind cause, const std::string& message);
  std::size_t index() const { return index_; }
  ErrorKind cause() const { return cause_; }

 private:
  std::size_t index_;
  ErrorKind cause_;
};

}  // namespace dps
