#pragma once

// Closed oriented 4-manifolds as formal connected sums of standard blocks.

#include <compare>
#include <cstdint>
#include <string>
#include <vector>

#include "fourfold/lattice.hpp"

namespace fourfold::manifold {

// Declaration order is the canonical summand order inside an expression.
enum class BlockKind {
  CP2,
  NegCP2,
  E8,
  NegCP2Fake,
  CP2Fake,
  S2xS2,
  K3,
  NegK3,
  Enriques,
  W,
  S1xY,
  S2xSigma,
  S4,
};

class Block {
 public:
  static Block cp2() { return Block(BlockKind::CP2); }
  static Block neg_cp2() { return Block(BlockKind::NegCP2); }
  static Block neg_cp2_fake() { return Block(BlockKind::NegCP2Fake); }
  static Block cp2_fake() { return Block(BlockKind::CP2Fake); }
  static Block s2xs2() { return Block(BlockKind::S2xS2); }
  static Block k3() { return Block(BlockKind::K3); }
  static Block neg_k3() { return Block(BlockKind::NegK3); }
  static Block e8(int sign);
  static Block w() { return Block(BlockKind::W); }
  static Block enriques() { return Block(BlockKind::Enriques); }
  static Block s1xy(std::int64_t b1_of_y);
  static Block s2xsigma(std::int64_t genus);
  static Block s4() { return Block(BlockKind::S4); }

  BlockKind kind() const noexcept { return kind_; }
  /// E8 sign, b1(Y) for S1xY, genus for S2xSigma; 0 otherwise.
  std::int64_t param() const noexcept { return param_; }

  lattice::IntersectionForm form() const;
  std::int64_t b1() const;
  std::int64_t b2() const;
  std::int64_t signature() const;
  bool spin() const;
  int ks() const;
  bool w2_nonzero_torsion() const;
  /// Number of Z/2 torsion generators in H^2 carried by this block.
  int torsion_generators() const;
  std::int64_t h1z2_rank() const;

  bool simply_connected() const;
  /// S1xY and S2xSigma: the summands that carry the double cover.
  bool n_type() const;

  Block mirrored() const;
  std::string name() const;

  auto operator<=>(const Block&) const = default;

 private:
  explicit Block(BlockKind kind, std::int64_t param = 0) : kind_(kind), param_(param) {}

  BlockKind kind_;
  std::int64_t param_;
};

class ManifoldExpr {
 public:
  ManifoldExpr() = default;
  explicit ManifoldExpr(std::vector<Block> blocks);
  static ManifoldExpr of(Block block, std::size_t multiplicity = 1);

  /// Canonically ordered summands; S4 never appears.
  const std::vector<Block>& blocks() const noexcept { return blocks_; }
  bool empty() const noexcept { return blocks_.empty(); }

  lattice::IntersectionForm form() const;
  std::int64_t signature() const;
  std::int64_t b1() const;
  std::int64_t b2() const;
  std::int64_t b_plus() const;
  std::int64_t b_minus() const;
  bool spin() const;
  int ks() const;
  std::int64_t torsion_slots() const;
  std::int64_t h1z2_rank() const;
  std::size_t count(const Block& block) const;

  /// Sub-expression of simply-connected blocks (CP2, E8, S2xS2, K3, ...).
  ManifoldExpr simply_connected_part() const;
  /// Sub-expression of the remaining blocks (W, Enriques, S1xY, S2xSigma).
  ManifoldExpr other_part() const;

  bool operator==(const ManifoldExpr&) const = default;

 private:
  std::vector<Block> blocks_;
};

/// Expression text with equal neighbours grouped: "2*-E8 # 3*S2xS2"; "S4"
/// for the empty sum.
std::string to_string(const ManifoldExpr& x);

ManifoldExpr connected_sum(const ManifoldExpr& a, const ManifoldExpr& b);

/// Orientation reversal of every summand.
ManifoldExpr mirror(const ManifoldExpr& x);

/// Replace each Enriques block by -E8 # S2xS2 # W.
ManifoldExpr expand_enriques(const ManifoldExpr& x);

struct NormalizeOptions {
  bool reverse_orientation = false;
};

/// Rewrites the simply-connected part into its homeomorphism normal form.
/// Spin parts become p E8 # q S2xS2 with 8p = |sigma|. Non-spin parts become
/// p E8 # q S2xS2 # a CP2 # b NegCP2 (plus one fake summand when the E8 count
/// and ks disagree). Existing E8 summands are kept if they share one sign,
/// else those of sigma's sign; one is introduced when there are none and
/// |sigma| >= 9. W, S1xY and S2xSigma pass through; Enriques is expanded first.
ManifoldExpr normalize_homeo_type(const ManifoldExpr& x, NormalizeOptions options = {});

struct ReflectionSlot {
  std::size_t block_index = 0;  // position in x.blocks()
  BlockKind kind = BlockKind::S2xS2;
  /// Integral action on the block's H^2 in its own coordinates.
  lattice::Matrix action;
  /// Coordinates (block-local) of the H^+ generator whose sign is flipped.
  lattice::Vector h_plus_generator;

  bool operator==(const ReflectionSlot&) const = default;
};

/// One slot per S2xS2 and per CP2 summand, in block order.
std::vector<ReflectionSlot> reflection_slots(const ManifoldExpr& x);

/// The canonical block table: one row per block kind (parametrized kinds at
/// parameter 1), as a JSON document string.
std::string block_table_json();

}  // namespace fourfold::manifold
