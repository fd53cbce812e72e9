#pragma once

// Double covers of connected sums and the l-coefficient data they induce.
//
// The cover is described block by block: a bit vector in H^1(block; Z/2) for
// every summand. Simply-connected summands carry no bits. Over N-type summands
// (S1xY, S2xSigma) a nonzero selection kills the twisted H^2 entirely, so the
// free part of H^2(X; l) is the simply-connected part plus any N-type summand
// the cover leaves untwisted. Each W summand contributes one torsion bit.

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "fourfold/lattice.hpp"
#include "fourfold/manifold.hpp"

namespace fourfold::cover {

using Selection = std::vector<std::vector<std::uint8_t>>;

class LocalSystem {
 public:
  /// Empty system; real ones come from with_selection or build_paper_cover.
  LocalSystem() = default;

  /// Validates a selection (one bit vector of length h1z2_rank per block).
  /// Enriques summands are expanded first; the selection refers to the
  /// expanded block list.
  static LocalSystem with_selection(const manifold::ManifoldExpr& x, Selection selection);

  const manifold::ManifoldExpr& base() const noexcept { return base_; }
  const Selection& selection() const noexcept { return selection_; }

  bool nontrivial() const noexcept { return nontrivial_; }
  std::int64_t b_plus_ell() const noexcept { return b_plus_ell_; }
  std::int64_t free_rank_ell() const noexcept {
    return static_cast<std::int64_t>(free_form_.dimension());
  }
  std::size_t torsion_bits() const noexcept { return torsion_block_.size(); }
  bool w1_sq_zero() const noexcept { return true; }
  /// Not computed for these covers; always 0 with b1_ell_modeled() false.
  std::int64_t b1_ell() const noexcept { return 0; }
  bool b1_ell_modeled() const noexcept { return false; }

  /// Intersection form on the free part of H^2(X; l).
  const lattice::IntersectionForm& free_form() const noexcept { return free_form_; }
  /// Free coordinates owned by block i: [free_offset(i), free_offset(i) + free_width(i)).
  std::size_t free_offset(std::size_t block) const { return free_offset_.at(block); }
  std::size_t free_width(std::size_t block) const { return free_width_.at(block); }
  /// Block index carrying torsion bit j.
  std::size_t torsion_block(std::size_t j) const { return torsion_block_.at(j); }

  bool operator==(const LocalSystem&) const = default;

 private:
  manifold::ManifoldExpr base_;
  Selection selection_;
  bool nontrivial_ = false;
  std::int64_t b_plus_ell_ = 0;
  lattice::IntersectionForm free_form_;
  std::vector<std::size_t> free_offset_;
  std::vector<std::size_t> free_width_;
  std::vector<std::size_t> torsion_block_;
};

/// Cover trivial on the simply-connected summands and nonzero on every N-type
/// summand (the S^1 factor for S1xY, the first class for S2xSigma).
LocalSystem build_paper_cover(const manifold::ManifoldExpr& x);

/// Mod-2 class split as free bits and torsion bits.
struct Mod2Class {
  std::vector<std::uint8_t> free_bits;
  std::vector<std::uint8_t> torsion_bits;

  bool is_zero() const;
  bool operator==(const Mod2Class&) const = default;
};

/// w2(X) + w1(l_R)^2 in the block decomposition.
Mod2Class w2_plus_w1sq(const LocalSystem& ls);

struct CharClass {
  lattice::Vector free_part;
  std::vector<std::uint8_t> torsion_part;
  std::int64_t square = 0;
  bool mod2_ok = false;

  bool operator==(const CharClass&) const = default;
};

/// Fills in the derived fields; throws DimensionMismatch.
CharClass make_class(const LocalSystem& ls, lattice::Vector free_part,
                     std::vector<std::uint8_t> torsion_part);

bool spinc_minus_exists(const LocalSystem& ls, const CharClass& c);

inline constexpr std::size_t kDefaultEnumerationLimit = std::size_t{1} << 22;

/// Every class with free entries in [-bound, bound] admitting a Spin^{c-}
/// structure, by square descending then coordinates ascending.
std::vector<CharClass> enumerate_characteristics(const LocalSystem& ls, int bound = 1,
                                                 std::size_t limit = kDefaultEnumerationLimit);
/// Same result through the serial reference kernel.
std::vector<CharClass> enumerate_characteristics_serial(
    const LocalSystem& ls, int bound = 1, std::size_t limit = kDefaultEnumerationLimit);

/// "[[..],[..],..|t..]": free coordinates grouped by block, torsion bits last.
std::string serialize(const LocalSystem& ls, const CharClass& c);
std::string serialize(const LocalSystem& ls, const Mod2Class& c);

}  // namespace fourfold::cover
