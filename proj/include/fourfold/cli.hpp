#pragma once

// Text front end: the connected-sum expression grammar, certificate JSON, the
// constraints data format and the command dispatcher behind tools/fourfold.
//
//   expr  := term ('#' term)*
//   term  := [INT '*'] block
//   block := CP2 | -CP2 | -CP2fake | CP2fake | S2xS2 | K3 | -K3 | E8 | -E8
//          | W | Enriques | S4 | S1xY(b1=INT) | S2xSigma(g=INT)

#include <iosfwd>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "fourfold/charpoly.hpp"
#include "fourfold/manifold.hpp"
#include "fourfold/obstruct.hpp"

namespace fourfold::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInputError = 1;
inline constexpr int kExitInconclusive = 3;

/// Throws ParseFailure (ParseError, GenusZero, NegativeMultiplicity).
manifold::ManifoldExpr parse(std::string_view text);
std::string render(const manifold::ManifoldExpr& x);

/// Deterministic certificate document, pretty-printed with two-space indent.
std::string emit_json(const obstruct::Certificate& c);

/// V1 / W1 index data for the constraints command:
///
///   # comment
///   V1
///   rank 2
///   w_1 = t1 + t2
///   W1
///   rank 0
///
/// Classes not listed are zero.
std::pair<charpoly::BundleClassData, charpoly::BundleClassData> parse_constraints(
    std::string_view text, int generators);

/// Runs one command line (args excludes the program name).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace fourfold::cli
