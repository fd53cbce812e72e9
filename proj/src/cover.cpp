#include "fourfold/cover.hpp"

#include <algorithm>
#include <map>

#include "fourfold/errors.hpp"
#include "fourfold/kernels.hpp"

namespace fourfold::cover {

using manifold::Block;
using manifold::BlockKind;
using manifold::ManifoldExpr;

namespace {

bool any_bit(const std::vector<std::uint8_t>& bits) {
  return std::any_of(bits.begin(), bits.end(), [](std::uint8_t b) { return b != 0; });
}

std::string block_label(const Block& b, std::size_t i) {
  return b.name() + " (block " + std::to_string(i) + ")";
}

}  // namespace

LocalSystem LocalSystem::with_selection(const ManifoldExpr& x, Selection selection) {
  LocalSystem ls;
  ls.base_ = manifold::expand_enriques(x);
  const auto& blocks = ls.base_.blocks();
  if (selection.size() != blocks.size()) {
    throw Error(ErrorCode::DimensionMismatch,
                "selection has " + std::to_string(selection.size()) + " entries for " +
                    std::to_string(blocks.size()) + " blocks");
  }

  std::vector<lattice::Atom> atoms;
  std::size_t offset = 0;
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    const Block& b = blocks[i];
    auto& bits = selection[i];
    if (bits.size() != static_cast<std::size_t>(b.h1z2_rank())) {
      throw Error(ErrorCode::DimensionMismatch,
                  "selection on " + block_label(b, i) + " has " + std::to_string(bits.size()) +
                      " bits, expected " + std::to_string(b.h1z2_rank()));
    }
    for (auto& bit : bits) {
      if (bit > 1) throw Error(ErrorCode::UnsupportedSelection, "selection bits must be 0 or 1");
    }
    const bool twisted = any_bit(bits);
    if (twisted && b.kind() == BlockKind::W) {
      throw Error(ErrorCode::UnsupportedSelection,
                  "covers nontrivial on " + block_label(b, i) + " are not modeled");
    }
    if (twisted && b.kind() == BlockKind::S1xY && bits[0] == 0) {
      throw Error(ErrorCode::UnsupportedSelection,
                  "selection on " + block_label(b, i) + " must include the circle factor");
    }
    ls.nontrivial_ = ls.nontrivial_ || twisted;

    std::size_t width = 0;
    if (b.simply_connected() || (b.n_type() && !twisted)) {
      const auto form = b.form();
      atoms.insert(atoms.end(), form.summands().begin(), form.summands().end());
      width = form.dimension();
    }
    ls.free_offset_.push_back(offset);
    ls.free_width_.push_back(width);
    offset += width;
    for (int t = 0; t < b.torsion_generators(); ++t) ls.torsion_block_.push_back(i);
  }
  if (!ls.nontrivial_) {
    throw Error(ErrorCode::NoNontrivialCoverAvailable, "selection defines the trivial cover");
  }
  ls.selection_ = std::move(selection);
  ls.free_form_ = lattice::IntersectionForm(std::move(atoms));
  ls.b_plus_ell_ = static_cast<std::int64_t>(lattice::invariants(ls.free_form_).b_plus);
  return ls;
}

LocalSystem build_paper_cover(const ManifoldExpr& x) {
  const ManifoldExpr base = manifold::expand_enriques(x);
  Selection sel;
  bool any_n = false;
  for (const auto& b : base.blocks()) {
    std::vector<std::uint8_t> bits(static_cast<std::size_t>(b.h1z2_rank()), 0);
    if (b.n_type()) {
      bits.at(0) = 1;
      any_n = true;
    }
    sel.push_back(std::move(bits));
  }
  if (!any_n) {
    throw Error(ErrorCode::NoNontrivialCoverAvailable,
                "no S1xY or S2xSigma summand to carry a nontrivial double cover");
  }
  return LocalSystem::with_selection(base, std::move(sel));
}

bool Mod2Class::is_zero() const { return !any_bit(free_bits) && !any_bit(torsion_bits); }

Mod2Class w2_plus_w1sq(const LocalSystem& ls) {
  Mod2Class out;
  out.free_bits = lattice::characteristic_residue(ls.free_form());
  out.torsion_bits.assign(ls.torsion_bits(), 1);
  return out;
}

CharClass make_class(const LocalSystem& ls, lattice::Vector free_part,
                     std::vector<std::uint8_t> torsion_part) {
  if (free_part.size() != ls.free_form().dimension() ||
      torsion_part.size() != ls.torsion_bits()) {
    throw Error(ErrorCode::DimensionMismatch,
                "class has " + std::to_string(free_part.size()) + "+" +
                    std::to_string(torsion_part.size()) + " coordinates, cover expects " +
                    std::to_string(ls.free_form().dimension()) + "+" +
                    std::to_string(ls.torsion_bits()));
  }
  CharClass c;
  c.square = lattice::square(ls.free_form(), free_part);
  c.mod2_ok = lattice::is_characteristic(ls.free_form(), free_part) &&
              std::all_of(torsion_part.begin(), torsion_part.end(),
                          [](std::uint8_t b) { return b == 1; });
  c.free_part = std::move(free_part);
  c.torsion_part = std::move(torsion_part);
  return c;
}

bool spinc_minus_exists(const LocalSystem& ls, const CharClass& c) {
  return make_class(ls, c.free_part, c.torsion_part).mod2_ok;
}

namespace {

// Candidates for one atom: coordinates in [-bound, bound] whose parity matches
// the characteristic residue. For a unimodular atom that is exactly the set of
// characteristic vectors.
kernels::CandidateSet atom_candidates(const lattice::Atom& atom, int bound) {
  const lattice::IntersectionForm single({atom});
  const auto residue = lattice::characteristic_residue(single);
  const std::size_t r = single.dimension();
  std::vector<std::vector<std::int64_t>> values(r);
  for (std::size_t i = 0; i < r; ++i) {
    for (std::int64_t v = -bound; v <= bound; ++v) {
      if (((v % 2) != 0) == (residue[i] != 0)) values[i].push_back(v);
    }
  }
  kernels::CandidateSet set;
  set.width = r;
  std::vector<std::size_t> digit(r, 0);
  lattice::Vector vec(r);
  while (true) {
    for (std::size_t i = 0; i < r; ++i) vec[i] = values[i][digit[i]];
    set.coords.insert(set.coords.end(), vec.begin(), vec.end());
    set.squares.push_back(lattice::square(single, vec));
    std::size_t pos = r;
    bool done = true;
    while (pos > 0) {
      --pos;
      if (++digit[pos] < values[pos].size()) {
        done = false;
        break;
      }
      digit[pos] = 0;
    }
    if (done) break;
  }
  return set;
}

template <class Kernel>
std::vector<CharClass> enumerate_with(const LocalSystem& ls, int bound, std::size_t limit,
                                      Kernel kernel) {
  if (bound < 1) {
    throw Error(ErrorCode::PreconditionViolated, "enumeration bound must be at least 1");
  }
  // Atoms of the same kind share one candidate set.
  std::map<std::string, kernels::CandidateSet> cache;
  std::vector<kernels::CandidateSet> sets;
  for (const auto& atom : ls.free_form().summands()) {
    std::string key;
    if (const auto* d = std::get_if<lattice::Diag>(&atom)) key = "d" + std::to_string(d->sign);
    else if (std::holds_alternative<lattice::Hyperbolic>(atom)) key = "h";
    else if (const auto* e = std::get_if<lattice::E8>(&atom)) key = "e" + std::to_string(e->sign);
    auto it = key.empty() ? cache.end() : cache.find(key);
    if (it == cache.end()) {
      auto set = atom_candidates(atom, bound);
      if (key.empty()) {
        sets.push_back(std::move(set));
        continue;
      }
      it = cache.emplace(key, std::move(set)).first;
    }
    sets.push_back(it->second);
  }
  if (kernels::product_size(sets, limit) == 0) {
    throw Error(ErrorCode::EnumerationTooLarge,
                "more than " + std::to_string(limit) + " candidate classes at bound " +
                    std::to_string(bound));
  }
  const kernels::ProductTable table = kernel(sets);

  std::vector<std::size_t> order(table.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  const std::size_t w = table.width;
  auto row = [&](std::size_t i) { return table.coords.begin() + static_cast<std::ptrdiff_t>(i * w); };
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (table.squares[a] != table.squares[b]) return table.squares[a] > table.squares[b];
    return std::lexicographical_compare(row(a), row(a) + static_cast<std::ptrdiff_t>(w), row(b),
                                        row(b) + static_cast<std::ptrdiff_t>(w));
  });

  std::vector<CharClass> out;
  out.reserve(order.size());
  for (std::size_t i : order) {
    CharClass c;
    c.free_part.assign(row(i), row(i) + static_cast<std::ptrdiff_t>(w));
    c.torsion_part.assign(ls.torsion_bits(), 1);
    c.square = table.squares[i];
    c.mod2_ok = true;
    out.push_back(std::move(c));
  }
  return out;
}

}  // namespace

std::vector<CharClass> enumerate_characteristics(const LocalSystem& ls, int bound,
                                                 std::size_t limit) {
  return enumerate_with(ls, bound, limit, [](const std::vector<kernels::CandidateSet>& s) {
    return kernels::enumerate_product_parallel(s);
  });
}

std::vector<CharClass> enumerate_characteristics_serial(const LocalSystem& ls, int bound,
                                                        std::size_t limit) {
  return enumerate_with(ls, bound, limit, [](const std::vector<kernels::CandidateSet>& s) {
    return kernels::enumerate_product_serial(s);
  });
}

namespace {

template <class T>
std::string render_blocks(const LocalSystem& ls, const std::vector<T>& free,
                          const std::vector<std::uint8_t>& torsion) {
  std::string out = "[";
  for (std::size_t i = 0; i < ls.base().blocks().size(); ++i) {
    if (i > 0) out += ",";
    out += "[";
    for (std::size_t j = 0; j < ls.free_width(i); ++j) {
      if (j > 0) out += ",";
      out += std::to_string(free.at(ls.free_offset(i) + j));
    }
    out += "]";
  }
  out += "|";
  for (std::size_t j = 0; j < torsion.size(); ++j) {
    if (j > 0) out += ",";
    out += std::to_string(torsion[j]);
  }
  return out + "]";
}

}  // namespace

std::string serialize(const LocalSystem& ls, const CharClass& c) {
  return render_blocks(ls, c.free_part, c.torsion_part);
}

std::string serialize(const LocalSystem& ls, const Mod2Class& c) {
  return render_blocks(ls, c.free_bits, c.torsion_bits);
}

}  // namespace fourfold::cover
