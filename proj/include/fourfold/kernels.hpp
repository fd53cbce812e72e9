#pragma once

// Data-parallel inner loops. Every kernel comes as a pair: an OpenMP version
// used by the library and a serial reference that tests and the benchmark
// compare it against. Both produce bit-identical, canonically ordered output.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "fourfold/monomial.hpp"

namespace fourfold::kernels {

// ---------------------------------------------------------------------------
// Exterior-algebra products over Z/2.

struct ProductRules {
  bool truncate_u_squared = false;  // C4 ring: u^2 = 0
  std::int32_t max_u_degree = 64;   // |u| cap; exceeding it throws UDegreeOverflow
};

/// Product of two canonical term lists (sorted by canonical_less, no
/// duplicates). Pairs with overlapping generator masks vanish; equal
/// products cancel in pairs.
std::vector<charpoly::Monomial> exterior_product_serial(
    std::span<const charpoly::Monomial> a, std::span<const charpoly::Monomial> b,
    const ProductRules& rules);
std::vector<charpoly::Monomial> exterior_product_parallel(
    std::span<const charpoly::Monomial> a, std::span<const charpoly::Monomial> b,
    const ProductRules& rules);

// ---------------------------------------------------------------------------
// Cartesian products of per-atom candidate vectors.

/// Candidate coordinate blocks for one orthogonal summand.
struct CandidateSet {
  std::size_t width = 0;
  std::vector<std::int64_t> coords;   // size() * width entries, row-major
  std::vector<std::int64_t> squares;  // one per candidate

  std::size_t size() const noexcept { return squares.size(); }
};

struct ProductTable {
  std::size_t width = 0;
  std::vector<std::int64_t> coords;   // count * width
  std::vector<std::int64_t> squares;  // count

  std::size_t size() const noexcept { return squares.size(); }
};

/// Number of rows of the product, or 0 if it would exceed `limit`.
std::size_t product_size(std::span<const CandidateSet> sets, std::size_t limit);

/// All concatenations, first set varying slowest; squares are summed.
ProductTable enumerate_product_serial(std::span<const CandidateSet> sets);
ProductTable enumerate_product_parallel(std::span<const CandidateSet> sets);

/// Threads available to the parallel kernels (1 when built without OpenMP).
int max_threads();

}  // namespace fourfold::kernels
