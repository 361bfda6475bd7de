#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace uforge {

enum class ErrorKind {
  CompositeCharacteristic,
  OddCharacteristicRequired,
  Overflow,
  DivisionByZero,
  InvalidParameters,
  SamePoint,
  NotClosed,
  BudgetExceeded,
  HypothesisFailed,
  SizeMismatch,
  PointInUnital,
  DegenerateTriple,
  NoObstructionFound,
  CriterionMismatch,
  LemmaViolation,
  NotHomomorphism,
  NotSurjective,
  UnknownExperiment,
  IoFailure,
  InternalConsistency,
};

inline std::string_view to_string(ErrorKind k) {
  switch (k) {
    case ErrorKind::CompositeCharacteristic: return "CompositeCharacteristic";
    case ErrorKind::OddCharacteristicRequired: return "OddCharacteristicRequired";
    case ErrorKind::Overflow: return "Overflow";
    case ErrorKind::DivisionByZero: return "DivisionByZero";
    case ErrorKind::InvalidParameters: return "InvalidParameters";
    case ErrorKind::SamePoint: return "SamePoint";
    case ErrorKind::NotClosed: return "NotClosed";
    case ErrorKind::BudgetExceeded: return "BudgetExceeded";
    case ErrorKind::HypothesisFailed: return "HypothesisFailed";
    case ErrorKind::SizeMismatch: return "SizeMismatch";
    case ErrorKind::PointInUnital: return "PointInUnital";
    case ErrorKind::DegenerateTriple: return "DegenerateTriple";
    case ErrorKind::NoObstructionFound: return "NoObstructionFound";
    case ErrorKind::CriterionMismatch: return "CriterionMismatch";
    case ErrorKind::LemmaViolation: return "LemmaViolation";
    case ErrorKind::NotHomomorphism: return "NotHomomorphism";
    case ErrorKind::NotSurjective: return "NotSurjective";
    case ErrorKind::UnknownExperiment: return "UnknownExperiment";
    case ErrorKind::IoFailure: return "IoFailure";
    case ErrorKind::InternalConsistency: return "InternalConsistency";
  }
  return "Unknown";
}

/// Every failure raised by the library carries a machine-checkable kind.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

}  // namespace uforge
