#pragma once

// Families over tori built from commuting reflections, and the two
// nonsmoothability criteria evaluated on them.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fourfold/charpoly.hpp"
#include "fourfold/cover.hpp"
#include "fourfold/manifold.hpp"

namespace fourfold::obstruct {

/// Sign action of one torus generator on the free part of H^2(X; l).
struct GeneratorAction {
  std::size_t slot_block = 0;
  std::size_t free_offset = 0;  // first free coordinate of the moved block
  lattice::Matrix action;       // block-local matrix
};

struct FamilyDescriptor {
  std::size_t base_dim = 0;
  manifold::ManifoldExpr manifold;
  cover::LocalSystem cover;
  std::vector<manifold::ReflectionSlot> generators;
  std::vector<GeneratorAction> actions;
  charpoly::BundleClassData h_plus_bundle;
};

/// Largest torus dimension a family may have. The total class of H+ has 2^k
/// terms, so this bounds memory and time.
inline constexpr std::size_t kMaxBaseDim = 20;

/// Throws SlotUnavailable for slots not offered by reflection_slots(x) or
/// repeated, TooManyGenerators if there are more slots than b_plus_ell or
/// more than kMaxBaseDim.
FamilyDescriptor build_family(const manifold::ManifoldExpr& x, const cover::LocalSystem& ls,
                              const std::vector<manifold::ReflectionSlot>& slots);

/// Each generator maps c's component on its block to plus or minus itself.
bool lift_valid(const FamilyDescriptor& f, const cover::CharClass& c);

enum class Verdict { NonSmoothable, Inconclusive };
enum class Theorem { ThmA, ThmB, None };

std::string to_string(Verdict v);
std::string to_string(Theorem t);

struct TranscriptStep {
  std::string fact;
  std::string value;

  bool operator==(const TranscriptStep&) const = default;
};

enum class Scenario { Auto, Spin, NonSpin, Enriques };

std::string to_string(Scenario s);
Scenario scenario_from_string(const std::string& s);

struct CertifyOptions {
  Scenario scenario = Scenario::Auto;
  bool reverse = false;
  int bound = 1;

  bool operator==(const CertifyOptions&) const = default;
};

struct CertificateInputs {
  manifold::ManifoldExpr expression;  // as given, before any mirroring
  CertifyOptions options;
  Scenario scenario_used = Scenario::Auto;

  bool operator==(const CertificateInputs&) const = default;
};

struct Certificate {
  Verdict verdict = Verdict::Inconclusive;
  Theorem theorem = Theorem::None;
  std::size_t base_dim = 0;
  std::int64_t b_plus_ell = 0;
  std::string witness_monomial;  // "" when no class is nonzero
  std::optional<std::int64_t> c1_square;
  std::int64_t sigma = 0;
  std::optional<std::int64_t> real_m_minus_n;     // ThmA index
  std::optional<std::int64_t> complex_r_minus_s;  // ThmB index
  CertificateInputs inputs;
  std::vector<TranscriptStep> transcript;

  bool operator==(const Certificate&) const = default;
};

/// ThmA test: w_{b+}(H+) != 0 and c^2 > sigma. Throws
/// PreconditionViolated when lift_valid(f, c) fails.
Certificate check_theorem_A(const FamilyDescriptor& f, const cover::CharClass& c);

/// ThmB test with the zero class: (w_{b+} or w_{b+-1}) != 0 and
/// sigma < 0. Throws ZeroClassUnavailable when 0 is not characteristic.
Certificate check_theorem_B(const FamilyDescriptor& f);

struct ConstraintRow {
  int degree = 0;
  std::string virtual_class;  // w_i([W1] - [V1])
  std::string product;        // times e(H+)
  bool satisfied = true;
};

struct ConstraintReport {
  std::int64_t n_minus_m = 0;  // rank W1 - rank V1
  std::string euler_h_plus;
  std::vector<ConstraintRow> rows;  // degrees i > n - m, up to base_dim
  bool incompatible = false;
};

/// Corollary 3.2 on user-supplied index data.
ConstraintReport corollary_constraints(const FamilyDescriptor& f,
                                       const charpoly::BundleClassData& v1,
                                       const charpoly::BundleClassData& w1);

/// The family the certifier would build for x under a fixed scenario (not
/// Auto), with the orientation and slot choices it makes.
FamilyDescriptor scenario_family(const manifold::ManifoldExpr& x, Scenario scenario,
                                 bool reverse = false);

/// End-to-end run of the certification pipeline. Throws HypothesesNotMet with
/// the failed hypothesis as its message.
Certificate certify(const manifold::ManifoldExpr& x, const CertifyOptions& options = {});

/// Re-run certify from the echoed inputs and compare every field.
bool replay(const Certificate& c);

}  // namespace fourfold::obstruct
