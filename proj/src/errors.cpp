#include "conformal/errors.hpp"

namespace conformal {

const char* err_name(Err e) {
  switch (e) {
    case Err::Syntax: return "SyntaxError";
    case Err::UnknownIdentifier: return "UnknownIdentifier";
    case Err::DivisionNearZero: return "DivisionNearZero";
    case Err::BasePointMismatch: return "BasePointMismatch";
    case Err::BudgetExceeded: return "BudgetExceeded";
    case Err::NotContracting: return "NotContracting";
    case Err::EscapesInterval: return "EscapesInterval";
    case Err::NonPositiveProb: return "NonPositiveProb";
    case Err::EmptyCell: return "EmptyCell";
    case Err::ZeroScale: return "ZeroScale";
    case Err::InvalidDistribution: return "InvalidDistribution";
    case Err::ZeroMass: return "ZeroMass";
    case Err::NoRootBracket: return "NoRootBracket";
    case Err::ExactOverlap: return "ExactOverlapDetected";
    case Err::HypothesisViolated: return "HypothesisViolated";
    case Err::NonDegenerate: return "NonDegenerateCheckFailed";
    case Err::InsufficientAlphabet: return "InsufficientAlphabet";
    case Err::OutOfRange: return "OutOfRange";
    case Err::Io: return "IoError";
  }
  return "UnknownError";
}

LabError::LabError(Err code, const std::string& msg, std::size_t offset)
    : std::runtime_error(std::string(err_name(code)) + ": " + msg),
      code_(code),
      offset_(offset) {}

void fail(Err code, const std::string& msg) { throw LabError(code, msg); }

void fail_at(Err code, const std::string& msg, std::size_t offset) {
  throw LabError(code, msg + " (byte " + std::to_string(offset) + ")", offset);
}

}  // namespace conformal
