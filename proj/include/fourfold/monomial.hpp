#pragma once

// A single Z/2 monomial t_S u^a v^b in Lambda[t_1..t_k] (x) Z2[u^{+-1}, v].
// The generator subset S is a bitmask (bit i-1 <-> t_i), so t_i^2 = 0 holds by
// construction.

#include <bit>
#include <compare>
#include <cstdint>

namespace fourfold::charpoly {

struct Monomial {
  std::uint32_t mask = 0;
  std::int32_t u = 0;
  std::int32_t v = 0;

  int lambda_degree() const noexcept { return std::popcount(mask); }
  int degree() const noexcept { return lambda_degree() + u + 2 * v; }

  bool operator==(const Monomial&) const = default;
};

// Canonical order: u-degree, then v-degree, then subset size, then the
// subsets' sorted index lists lexicographically.
inline bool canonical_less(const Monomial& a, const Monomial& b) noexcept {
  if (a.u != b.u) return a.u < b.u;
  if (a.v != b.v) return a.v < b.v;
  const int pa = std::popcount(a.mask), pb = std::popcount(b.mask);
  if (pa != pb) return pa < pb;
  if (a.mask == b.mask) return false;
  // Lowest differing generator decides: the subset containing it is smaller.
  const std::uint32_t diff = a.mask ^ b.mask;
  const std::uint32_t lowest = diff & (~diff + 1);
  return (a.mask & lowest) != 0;
}

struct CanonicalLess {
  bool operator()(const Monomial& a, const Monomial& b) const noexcept {
    return canonical_less(a, b);
  }
};

}  // namespace fourfold::charpoly
