#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace fourfold {

enum class ErrorCode {
  DimensionMismatch,
  DegenerateForm,
  DefiniteFormUnsupported,
  InvalidForm,
  DefinitePartUnsupported,
  SpinKSInconsistent,
  InvalidBlock,
  NoNontrivialCoverAvailable,
  UnsupportedSelection,
  EnumerationTooLarge,
  ModeMismatch,
  NonMonicDenominator,
  NonExactDivision,
  UDegreeOverflow,
  Overflow,
  SlotUnavailable,
  TooManyGenerators,
  PreconditionViolated,
  ZeroClassUnavailable,
  RankMismatch,
  HypothesesNotMet,
  ParseError,
  GenusZero,
  NegativeMultiplicity,
};

std::string_view to_string(ErrorCode code);

// Every failure in the library surfaces as this exception; `code()` is the
// stable identifier printed by the CLI.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

// Parse errors carry the byte offset into the source text.
class ParseFailure : public Error {
 public:
  ParseFailure(ErrorCode code, const std::string& message, std::size_t offset)
      : Error(code, message + " at byte " + std::to_string(offset)),
        offset_(offset) {}

  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

}  // namespace fourfold
