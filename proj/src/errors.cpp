#include "fourfold/errors.hpp"

namespace fourfold {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::DegenerateForm: return "DegenerateForm";
    case ErrorCode::DefiniteFormUnsupported: return "DefiniteFormUnsupported";
    case ErrorCode::InvalidForm: return "InvalidForm";
    case ErrorCode::DefinitePartUnsupported: return "DefinitePartUnsupported";
    case ErrorCode::SpinKSInconsistent: return "SpinKSInconsistent";
    case ErrorCode::InvalidBlock: return "InvalidBlock";
    case ErrorCode::NoNontrivialCoverAvailable: return "NoNontrivialCoverAvailable";
    case ErrorCode::UnsupportedSelection: return "UnsupportedSelection";
    case ErrorCode::EnumerationTooLarge: return "EnumerationTooLarge";
    case ErrorCode::ModeMismatch: return "ModeMismatch";
    case ErrorCode::NonMonicDenominator: return "NonMonicDenominator";
    case ErrorCode::NonExactDivision: return "NonExactDivision";
    case ErrorCode::UDegreeOverflow: return "UDegreeOverflow";
    case ErrorCode::Overflow: return "Overflow";
    case ErrorCode::SlotUnavailable: return "SlotUnavailable";
    case ErrorCode::TooManyGenerators: return "TooManyGenerators";
    case ErrorCode::PreconditionViolated: return "PreconditionViolated";
    case ErrorCode::ZeroClassUnavailable: return "ZeroClassUnavailable";
    case ErrorCode::RankMismatch: return "RankMismatch";
    case ErrorCode::HypothesesNotMet: return "HypothesesNotMet";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::GenusZero: return "GenusZero";
    case ErrorCode::NegativeMultiplicity: return "NegativeMultiplicity";
  }
  return "Unknown";
}

}  // namespace fourfold
