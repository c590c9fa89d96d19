#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace conformal {

enum class Err {
  Syntax,
  UnknownIdentifier,
  DivisionNearZero,
  BasePointMismatch,
  BudgetExceeded,
  NotContracting,
  EscapesInterval,
  NonPositiveProb,
  EmptyCell,
  ZeroScale,
  InvalidDistribution,
  ZeroMass,
  NoRootBracket,
  ExactOverlap,
  HypothesisViolated,
  NonDegenerate,
  InsufficientAlphabet,
  OutOfRange,
  Io,
};

const char* err_name(Err e);

class LabError : public std::runtime_error {
 public:
  LabError(Err code, const std::string& msg, std::size_t offset = std::string::npos);
  Err code() const { return code_; }
  // Byte offset into the source text for parse errors, npos otherwise.
  std::size_t offset() const { return offset_; }

 private:
  Err code_;
  std::size_t offset_;
};

[[noreturn]] void fail(Err code, const std::string& msg);
[[noreturn]] void fail_at(Err code, const std::string& msg, std::size_t offset);

}  // namespace conformal
