#include <algorithm>
#include <cstdlib>
#include <limits>
#include <map>

#include "fourfold/errors.hpp"
#include "fourfold/kernels.hpp"

namespace fourfold::kernels {

using charpoly::CanonicalLess;
using charpoly::Monomial;

std::vector<Monomial> exterior_product_serial(std::span<const Monomial> a,
                                              std::span<const Monomial> b,
                                              const ProductRules& rules) {
  std::map<Monomial, bool, CanonicalLess> acc;
  for (const auto& x : a) {
    for (const auto& y : b) {
      if ((x.mask & y.mask) != 0) continue;
      const Monomial m{x.mask | y.mask, x.u + y.u, x.v + y.v};
      if (rules.truncate_u_squared && m.u >= 2) continue;
      if (std::abs(m.u) > rules.max_u_degree) {
        throw Error(ErrorCode::UDegreeOverflow,
                    "u-degree " + std::to_string(m.u) + " exceeds cap " +
                        std::to_string(rules.max_u_degree));
      }
      auto [it, inserted] = acc.emplace(m, true);
      if (!inserted) it->second = !it->second;
    }
  }
  std::vector<Monomial> out;
  for (const auto& [m, present] : acc) {
    if (present) out.push_back(m);
  }
  return out;
}

std::size_t product_size(std::span<const CandidateSet> sets, std::size_t limit) {
  std::size_t total = 1;
  for (const auto& s : sets) {
    if (s.size() == 0) return 0;
    if (total > limit / s.size()) return 0;
    total *= s.size();
  }
  return total <= limit ? total : 0;
}

ProductTable enumerate_product_serial(std::span<const CandidateSet> sets) {
  ProductTable out;
  for (const auto& s : sets) out.width += s.width;
  const std::size_t total = product_size(sets, std::numeric_limits<std::size_t>::max());
  bool any_empty = false;
  for (const auto& s : sets) any_empty = any_empty || s.size() == 0;
  if (any_empty) return out;

  out.coords.reserve(total * out.width);
  out.squares.reserve(total);
  // Odometer over candidate indices, last set fastest.
  std::vector<std::size_t> digit(sets.size(), 0);
  while (true) {
    std::int64_t sq = 0;
    for (std::size_t s = 0; s < sets.size(); ++s) {
      const auto& set = sets[s];
      const auto first = set.coords.begin() + static_cast<std::ptrdiff_t>(digit[s] * set.width);
      out.coords.insert(out.coords.end(), first, first + static_cast<std::ptrdiff_t>(set.width));
      sq += set.squares[digit[s]];
    }
    out.squares.push_back(sq);
    std::size_t pos = sets.size();
    while (pos > 0) {
      --pos;
      if (++digit[pos] < sets[pos].size()) break;
      digit[pos] = 0;
      if (pos == 0) return out;
    }
    if (sets.empty()) return out;
  }
}

}  // namespace fourfold::kernels
