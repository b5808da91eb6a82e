#pragma once
#include <stdexcept>
#include <string>

namespace gcs {

// Error taxonomy. Each code maps to a CLI exit class:
//   verification failures -> 1, invalid input -> 2,
//   unsupported/uncovered length -> 3, resource budget -> 4.
enum class Errc {
  // verification
  VerificationFailed,
  NotCertifiedInput,
  PerfectionFailed,
  NotPerfect,
  NotHadamardSeed,
  CorpusVerificationFailed,
  FlipCorrMismatch,
  // invalid input
  LengthMismatch,
  OrderMismatch,
  NotPolyphase,
  NotQuad,
  NotPair,
  NotTwoPhase,
  TrivialTwoPhase,
  QuarterScaleViolation,
  GroupingMismatch,
  OddCardinality,
  RouteConstraintViolated,
  ShapeMismatch,
  NotDisjoint,
  NotQuasiSymmetric,
  NonCommutingEntries,
  ShapeViolation,
  ParseError,
  CorpusParse,
  PlanArithmeticMismatch,
  InvalidArgument,
  // unsupported length / coverage
  UnsupportedSeedLength,
  UnsupportedLength,
  DigitNotCovered,
  CorpusRequired,
  ThresholdUnavailable,
  // resource budget
  BudgetExceeded,
};

class Error : public std::runtime_error {
 public:
  Error(Errc code, std::string msg) : std::runtime_error(std::move(msg)), code_(code) {}
  Errc code() const { return code_; }

  int exit_class() const {
    switch (code_) {
      case Errc::VerificationFailed:
      case Errc::NotCertifiedInput:
      case Errc::PerfectionFailed:
      case Errc::NotPerfect:
      case Errc::NotHadamardSeed:
      case Errc::CorpusVerificationFailed:
      case Errc::FlipCorrMismatch:
        return 1;
      case Errc::UnsupportedSeedLength:
      case Errc::UnsupportedLength:
      case Errc::DigitNotCovered:
      case Errc::CorpusRequired:
      case Errc::ThresholdUnavailable:
        return 3;
      case Errc::BudgetExceeded:
        return 4;
      default:
        return 2;
    }
  }

 private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& msg) { throw Error(code, msg); }

}  // namespace gcs
