#include "fourfold/manifold.hpp"

#include <algorithm>
#include <cstdlib>
#include "json.hpp"
#include <utility>

#include "fourfold/errors.hpp"

namespace fourfold::manifold {

using lattice::Atom;
using lattice::Diag;
using lattice::Hyperbolic;
using lattice::IntersectionForm;

Block Block::e8(int sign) {
  if (sign != 1 && sign != -1) {
    throw Error(ErrorCode::InvalidBlock, "E8 sign must be +1 or -1");
  }
  return Block(BlockKind::E8, sign);
}

Block Block::s1xy(std::int64_t b1_of_y) {
  if (b1_of_y < 0) {
    throw Error(ErrorCode::InvalidBlock, "S1xY requires b1(Y) >= 0");
  }
  return Block(BlockKind::S1xY, b1_of_y);
}

Block Block::s2xsigma(std::int64_t genus) {
  if (genus < 1) {
    throw Error(ErrorCode::GenusZero, "S2xSigma requires positive genus");
  }
  return Block(BlockKind::S2xSigma, genus);
}

IntersectionForm Block::form() const {
  std::vector<Atom> atoms;
  switch (kind_) {
    case BlockKind::CP2:
    case BlockKind::CP2Fake:
      atoms.emplace_back(Diag{1});
      break;
    case BlockKind::NegCP2:
    case BlockKind::NegCP2Fake:
      atoms.emplace_back(Diag{-1});
      break;
    case BlockKind::E8:
      atoms.emplace_back(lattice::E8{static_cast<int>(param_)});
      break;
    case BlockKind::S2xS2:
    case BlockKind::S2xSigma:
      atoms.emplace_back(Hyperbolic{});
      break;
    case BlockKind::K3:
    case BlockKind::NegK3: {
      const int sign = kind_ == BlockKind::K3 ? -1 : 1;
      atoms.emplace_back(lattice::E8{sign});
      atoms.emplace_back(lattice::E8{sign});
      for (int i = 0; i < 3; ++i) atoms.emplace_back(Hyperbolic{});
      break;
    }
    case BlockKind::Enriques:
      atoms.emplace_back(lattice::E8{-1});
      atoms.emplace_back(Hyperbolic{});
      break;
    case BlockKind::S1xY:
      // H^1(Y) x H^1(S^1) pairs against H^2(Y).
      for (std::int64_t i = 0; i < param_; ++i) atoms.emplace_back(Hyperbolic{});
      break;
    case BlockKind::W:
    case BlockKind::S4:
      break;
  }
  return IntersectionForm(std::move(atoms));
}

std::int64_t Block::b1() const {
  switch (kind_) {
    case BlockKind::S1xY: return 1 + param_;
    case BlockKind::S2xSigma: return 2 * param_;
    default: return 0;
  }
}

std::int64_t Block::b2() const { return static_cast<std::int64_t>(form().dimension()); }

std::int64_t Block::signature() const { return lattice::invariants(form()).signature; }

bool Block::spin() const {
  switch (kind_) {
    case BlockKind::CP2:
    case BlockKind::NegCP2:
    case BlockKind::NegCP2Fake:
    case BlockKind::CP2Fake:
    case BlockKind::Enriques:
    case BlockKind::W:
      return false;
    default:
      return true;
  }
}

int Block::ks() const {
  switch (kind_) {
    case BlockKind::E8:
    case BlockKind::NegCP2Fake:
    case BlockKind::CP2Fake:
    case BlockKind::W:
      return 1;
    default:
      return 0;
  }
}

bool Block::w2_nonzero_torsion() const {
  return kind_ == BlockKind::W || kind_ == BlockKind::Enriques;
}

int Block::torsion_generators() const {
  return (kind_ == BlockKind::W || kind_ == BlockKind::Enriques) ? 1 : 0;
}

std::int64_t Block::h1z2_rank() const {
  switch (kind_) {
    case BlockKind::W:
    case BlockKind::Enriques:
      return 1;
    case BlockKind::S1xY: return 1 + param_;
    case BlockKind::S2xSigma: return 2 * param_;
    default: return 0;
  }
}

bool Block::simply_connected() const {
  switch (kind_) {
    case BlockKind::Enriques:
    case BlockKind::W:
    case BlockKind::S1xY:
    case BlockKind::S2xSigma:
      return false;
    default:
      return true;
  }
}

bool Block::n_type() const {
  return kind_ == BlockKind::S1xY || kind_ == BlockKind::S2xSigma;
}

Block Block::mirrored() const {
  switch (kind_) {
    case BlockKind::CP2: return neg_cp2();
    case BlockKind::NegCP2: return cp2();
    case BlockKind::NegCP2Fake: return cp2_fake();
    case BlockKind::CP2Fake: return neg_cp2_fake();
    case BlockKind::E8: return e8(static_cast<int>(-param_));
    case BlockKind::K3: return neg_k3();
    case BlockKind::NegK3: return k3();
    case BlockKind::Enriques:
      throw Error(ErrorCode::InvalidBlock,
                  "Enriques has no mirror block; expand it first");
    default: return *this;
  }
}

std::string Block::name() const {
  switch (kind_) {
    case BlockKind::CP2: return "CP2";
    case BlockKind::NegCP2: return "-CP2";
    case BlockKind::E8: return param_ > 0 ? "E8" : "-E8";
    case BlockKind::NegCP2Fake: return "-CP2fake";
    case BlockKind::CP2Fake: return "CP2fake";
    case BlockKind::S2xS2: return "S2xS2";
    case BlockKind::K3: return "K3";
    case BlockKind::NegK3: return "-K3";
    case BlockKind::Enriques: return "Enriques";
    case BlockKind::W: return "W";
    case BlockKind::S1xY: return "S1xY(b1=" + std::to_string(param_) + ")";
    case BlockKind::S2xSigma: return "S2xSigma(g=" + std::to_string(param_) + ")";
    case BlockKind::S4: return "S4";
  }
  return "?";
}

ManifoldExpr::ManifoldExpr(std::vector<Block> blocks) {
  std::erase_if(blocks, [](const Block& b) { return b.kind() == BlockKind::S4; });
  std::sort(blocks.begin(), blocks.end());
  blocks_ = std::move(blocks);
}

ManifoldExpr ManifoldExpr::of(Block block, std::size_t multiplicity) {
  return ManifoldExpr(std::vector<Block>(multiplicity, block));
}

IntersectionForm ManifoldExpr::form() const {
  IntersectionForm out;
  for (const auto& b : blocks_) out = out + b.form();
  return out;
}

std::int64_t ManifoldExpr::signature() const {
  std::int64_t s = 0;
  for (const auto& b : blocks_) s += b.signature();
  return s;
}

std::int64_t ManifoldExpr::b1() const {
  std::int64_t s = 0;
  for (const auto& b : blocks_) s += b.b1();
  return s;
}

std::int64_t ManifoldExpr::b2() const {
  std::int64_t s = 0;
  for (const auto& b : blocks_) s += b.b2();
  return s;
}

std::int64_t ManifoldExpr::b_plus() const { return (b2() + signature()) / 2; }
std::int64_t ManifoldExpr::b_minus() const { return (b2() - signature()) / 2; }

bool ManifoldExpr::spin() const {
  return std::all_of(blocks_.begin(), blocks_.end(), [](const Block& b) { return b.spin(); });
}

int ManifoldExpr::ks() const {
  int s = 0;
  for (const auto& b : blocks_) s ^= b.ks();
  return s;
}

std::int64_t ManifoldExpr::torsion_slots() const {
  std::int64_t s = 0;
  for (const auto& b : blocks_) s += b.torsion_generators();
  return s;
}

std::int64_t ManifoldExpr::h1z2_rank() const {
  std::int64_t s = 0;
  for (const auto& b : blocks_) s += b.h1z2_rank();
  return s;
}

std::size_t ManifoldExpr::count(const Block& block) const {
  return static_cast<std::size_t>(std::count(blocks_.begin(), blocks_.end(), block));
}

ManifoldExpr ManifoldExpr::simply_connected_part() const {
  std::vector<Block> out;
  std::copy_if(blocks_.begin(), blocks_.end(), std::back_inserter(out),
               [](const Block& b) { return b.simply_connected(); });
  return ManifoldExpr(std::move(out));
}

ManifoldExpr ManifoldExpr::other_part() const {
  std::vector<Block> out;
  std::copy_if(blocks_.begin(), blocks_.end(), std::back_inserter(out),
               [](const Block& b) { return !b.simply_connected(); });
  return ManifoldExpr(std::move(out));
}

ManifoldExpr connected_sum(const ManifoldExpr& a, const ManifoldExpr& b) {
  std::vector<Block> all = a.blocks();
  all.insert(all.end(), b.blocks().begin(), b.blocks().end());
  return ManifoldExpr(std::move(all));
}

std::string to_string(const ManifoldExpr& x) {
  if (x.empty()) return "S4";
  std::string out;
  const auto& bs = x.blocks();
  for (std::size_t i = 0; i < bs.size();) {
    std::size_t j = i;
    while (j < bs.size() && bs[j] == bs[i]) ++j;
    if (!out.empty()) out += " # ";
    if (j - i > 1) out += std::to_string(j - i) + "*";
    out += bs[i].name();
    i = j;
  }
  return out;
}

ManifoldExpr expand_enriques(const ManifoldExpr& x) {
  std::vector<Block> out;
  for (const auto& b : x.blocks()) {
    if (b.kind() == BlockKind::Enriques) {
      out.push_back(Block::e8(-1));
      out.push_back(Block::s2xs2());
      out.push_back(Block::w());
    } else {
      out.push_back(b);
    }
  }
  return ManifoldExpr(std::move(out));
}

ManifoldExpr mirror(const ManifoldExpr& x) {
  std::vector<Block> out;
  const ManifoldExpr expanded = expand_enriques(x);
  for (const auto& b : expanded.blocks()) out.push_back(b.mirrored());
  return ManifoldExpr(std::move(out));
}

namespace {

void append(std::vector<Block>& out, const Block& b, std::int64_t count) {
  for (std::int64_t i = 0; i < count; ++i) out.push_back(b);
}

std::vector<Block> normal_simply_connected(const ManifoldExpr& sc) {
  const auto inv = lattice::invariants(sc.form());
  if (inv.definite == lattice::Definiteness::Positive ||
      inv.definite == lattice::Definiteness::Negative) {
    throw Error(ErrorCode::DefinitePartUnsupported,
                "simply-connected part is definite (sigma=" +
                    std::to_string(inv.signature) + ")");
  }
  const std::int64_t sigma = inv.signature;
  const auto b_plus = static_cast<std::int64_t>(inv.b_plus);
  const auto b_minus = static_cast<std::int64_t>(inv.b_minus);
  const int ks = sc.ks();
  std::vector<Block> out;

  if (inv.parity == lattice::Parity::Even) {
    const std::int64_t p = std::llabs(sigma) / 8;
    if (p % 2 != ks) {
      throw Error(ErrorCode::SpinKSInconsistent,
                  "spin part has ks=" + std::to_string(ks) + " but sigma/8=" +
                      std::to_string(p));
    }
    append(out, Block::e8(sigma > 0 ? 1 : -1), p);
    append(out, Block::s2xs2(), std::min(b_plus, b_minus));
    return out;
  }

  // Odd part: p E8 # q S2xS2 # a CP2 # b NegCP2. E8 summands are kept when
  // they all have one sign; otherwise those of the sign of sigma are kept, and
  // with none and |sigma| >= 9 a single one is split off.
  const auto neg_e8 = static_cast<std::int64_t>(sc.count(Block::e8(-1)));
  const auto pos_e8 = static_cast<std::int64_t>(sc.count(Block::e8(1)));
  int e8_sign = sigma > 0 ? 1 : -1;
  if ((neg_e8 == 0) != (pos_e8 == 0)) e8_sign = neg_e8 > 0 ? -1 : 1;
  std::int64_t p = e8_sign < 0 ? neg_e8 : pos_e8;
  if (p == 0 && std::llabs(sigma) >= 9) p = 1;
  std::int64_t rest_plus = b_plus, rest_minus = b_minus;
  (e8_sign > 0 ? rest_plus : rest_minus) -= 8 * p;
  std::int64_t q = std::min(rest_plus, rest_minus);
  if (rest_plus == rest_minus && q > 0) --q;  // keep at least one odd summand
  std::int64_t a = rest_plus - q, b = rest_minus - q;

  append(out, Block::e8(e8_sign), p);
  append(out, Block::s2xs2(), q);
  if (p % 2 != ks) {
    // Prefer a fake summand of the sign of sigma, matching the usual shape.
    if ((e8_sign < 0 && b > 0) || a == 0) {
      --b;
      append(out, Block::neg_cp2_fake(), 1);
    } else {
      --a;
      append(out, Block::cp2_fake(), 1);
    }
  }
  append(out, Block::cp2(), a);
  append(out, Block::neg_cp2(), b);
  return out;
}

}  // namespace

ManifoldExpr normalize_homeo_type(const ManifoldExpr& x, NormalizeOptions options) {
  const ManifoldExpr oriented = options.reverse_orientation ? mirror(x) : x;
  const ManifoldExpr expanded = expand_enriques(oriented);
  const ManifoldExpr sc = expanded.simply_connected_part();
  if (sc.empty()) return expanded;
  return connected_sum(ManifoldExpr(normal_simply_connected(sc)), expanded.other_part());
}

std::vector<ReflectionSlot> reflection_slots(const ManifoldExpr& x) {
  std::vector<ReflectionSlot> out;
  for (std::size_t i = 0; i < x.blocks().size(); ++i) {
    const auto kind = x.blocks()[i].kind();
    if (kind == BlockKind::S2xS2) {
      // (a, b) -> (-b, -a): an isometry of H sending a+b to -(a+b).
      out.push_back({i, kind, {{0, -1}, {-1, 0}}, {1, 1}});
    } else if (kind == BlockKind::CP2) {
      out.push_back({i, kind, {{-1}}, {1}});
    }
  }
  return out;
}

std::string block_table_json() {
  const std::vector<Block> rows = {
      Block::cp2(),        Block::neg_cp2(),     Block::e8(-1),       Block::e8(1),
      Block::neg_cp2_fake(), Block::cp2_fake(),  Block::s2xs2(),      Block::k3(),
      Block::neg_k3(),     Block::enriques(),    Block::w(),          Block::s1xy(1),
      Block::s2xsigma(1),  Block::s4(),
  };
  nlohmann::ordered_json doc = nlohmann::ordered_json::object();
  for (const auto& b : rows) {
    nlohmann::ordered_json row;
    row["b1"] = b.b1();
    row["b2"] = b.b2();
    row["sigma"] = b.signature();
    row["spin"] = b.spin();
    row["ks"] = b.ks();
    row["h1z2_rank"] = b.h1z2_rank();
    doc[b.name()] = row;
  }
  return doc.dump(2);
}

}  // namespace fourfold::manifold
