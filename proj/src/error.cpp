#include "dps/error.hpp"

namespace dps {

const char* error_kind_name(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Syntax: return "Syntax";
    case ErrorKind::AtomicExpression: return "AtomicExpression";
    case ErrorKind::NotATuple: return "NotATuple";
    case ErrorKind::DuplicateVariable: return "DuplicateVariable";
    case ErrorKind::ImproperOperand: return "ImproperOperand";
    case ErrorKind::NotAPermutation: return "NotAPermutation";
    case ErrorKind::FuelExhausted: return "FuelExhausted";
    case ErrorKind::DecreaseViolation: return "DecreaseViolation";
    case ErrorKind::PrimitiveError: return "PrimitiveError";
    case ErrorKind::SortMismatch: return "SortMismatch";
    case ErrorKind::SortError: return "SortError";
    case ErrorKind::IllFormedSpec: return "IllFormedSpec";
    case ErrorKind::UnknownLemma: return "UnknownLemma";
    case ErrorKind::UnknownRelation: return "UnknownRelation";
    case ErrorKind::NotInitial: return "NotInitial";
    case ErrorKind::NotUnifiable: return "NotUnifiable";
    case ErrorKind::BadPath: return "BadPath";
    case ErrorKind::NotSplittable: return "NotSplittable";
    case ErrorKind::NotOrphan: return "NotOrphan";
    case ErrorKind::StepFailed: return "StepFailed";
    case ErrorKind::NoFinalRow: return "NoFinalRow";
    case ErrorKind::Io: return "Io";
  }
  return "Unknown";
}

Error::Error(ErrorKind kind, const std::string& message)
    : std::runtime_error(std::string(error_kind_name(kind)) + ": " + message), kind_(kind) {}

StepFailed::StepFailed(std::size_t index, ErrorKind cause, const std::string& message)
    : Error(ErrorKind::StepFailed, "step " + std::to_string(index) + ": " + message),
      index_(index),
      cause_(cause) {}

}  // namespace dps
