#pragma once

// Hand-rolled generators and independent oracles shared by the test suites.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <random>
#include <tuple>
#include <vector>

#include "fourfold/charpoly.hpp"
#include "fourfold/lattice.hpp"
#include "fourfold/manifold.hpp"

namespace support {

using Rng = std::mt19937_64;
using fourfold::lattice::Matrix;
using fourfold::lattice::Vector;

inline int pick(Rng& rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

inline bool coin(Rng& rng) { return pick(rng, 0, 1) == 1; }

// ---------------------------------------------------------------------------
// Lattice generators.

inline fourfold::lattice::Atom random_atom(Rng& rng, bool allow_e8 = true) {
  using namespace fourfold::lattice;
  switch (pick(rng, 0, allow_e8 ? 3 : 2)) {
    case 0: return Diag{1};
    case 1: return Diag{-1};
    case 2: return Hyperbolic{};
    default: return E8{coin(rng) ? 1 : -1};
  }
}

inline fourfold::lattice::IntersectionForm random_form(Rng& rng, std::size_t max_rank) {
  using namespace fourfold::lattice;
  std::vector<Atom> atoms;
  std::size_t rank = 0;
  const int target = pick(rng, 1, static_cast<int>(max_rank));
  for (int tries = 0; tries < 50 && rank < static_cast<std::size_t>(target); ++tries) {
    Atom a = random_atom(rng, max_rank - rank >= 8);
    const std::size_t r = atom_rank(a);
    if (rank + r > max_rank) continue;
    rank += r;
    atoms.push_back(a);
  }
  return IntersectionForm(atoms);
}

/// Product of random elementary row operations: determinant +-1.
inline Matrix random_unimodular(Rng& rng, std::size_t n, int steps) {
  Matrix p(n, Vector(n, 0));
  for (std::size_t i = 0; i < n; ++i) p[i][i] = 1;
  if (n < 2) {
    if (n == 1 && coin(rng)) p[0][0] = -1;
    return p;
  }
  for (int s = 0; s < steps; ++s) {
    const auto i = static_cast<std::size_t>(pick(rng, 0, static_cast<int>(n) - 1));
    auto j = static_cast<std::size_t>(pick(rng, 0, static_cast<int>(n) - 2));
    if (j >= i) ++j;
    const int c = coin(rng) ? 1 : -1;
    for (std::size_t k = 0; k < n; ++k) p[i][k] += c * p[j][k];
  }
  return p;
}

/// P^T G P.
inline Matrix congruent(const Matrix& g, const Matrix& p) {
  const std::size_t n = g.size();
  Matrix out(n, Vector(n, 0));
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) {
      std::int64_t s = 0;
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) s += p[i][a] * g[i][j] * p[j][b];
      out[a][b] = s;
    }
  return out;
}

inline Vector apply(const Matrix& p, const Vector& v) {
  Vector out(p.size(), 0);
  for (std::size_t i = 0; i < p.size(); ++i)
    for (std::size_t j = 0; j < v.size(); ++j) out[i] += p[i][j] * v[j];
  return out;
}

// ---------------------------------------------------------------------------
// Lattice oracles, independent of the library's exact elimination.

struct Spectrum {
  std::size_t positive = 0, negative = 0, zero = 0;
};

/// Signs of eigenvalues by cyclic Jacobi rotations in double precision.
inline Spectrum jacobi_spectrum(const Matrix& g) {
  const std::size_t n = g.size();
  std::vector<std::vector<double>> a(n, std::vector<double>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) a[i][j] = static_cast<double>(g[i][j]);
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) off += a[i][j] * a[i][j];
    if (off < 1e-22) break;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) {
        if (std::abs(a[p][q]) < 1e-300) continue;
        const double theta = (a[q][q] - a[p][p]) / (2 * a[p][q]);
        const double t = (theta >= 0 ? 1 : -1) / (std::abs(theta) + std::sqrt(theta * theta + 1));
        const double c = 1 / std::sqrt(t * t + 1), s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a[k][p], akq = a[k][q];
          a[k][p] = c * akp - s * akq;
          a[k][q] = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a[p][k], aqk = a[q][k];
          a[p][k] = c * apk - s * aqk;
          a[q][k] = s * apk + c * aqk;
        }
      }
  }
  Spectrum out;
  for (std::size_t i = 0; i < n; ++i) {
    if (a[i][i] > 1e-7) ++out.positive;
    else if (a[i][i] < -1e-7) ++out.negative;
    else ++out.zero;
  }
  return out;
}

inline std::int64_t gram_square(const Matrix& g, const Vector& v) {
  std::int64_t s = 0;
  for (std::size_t i = 0; i < g.size(); ++i)
    for (std::size_t j = 0; j < g.size(); ++j) s += v[i] * g[i][j] * v[j];
  return s;
}

/// Q(v, e_i) = Q(e_i, e_i) mod 2 on every basis vector.
inline bool gram_characteristic(const Matrix& g, const Vector& v) {
  for (std::size_t i = 0; i < g.size(); ++i) {
    std::int64_t p = 0;
    for (std::size_t j = 0; j < g.size(); ++j) p += g[i][j] * v[j];
    if (((p - g[i][i]) % 2) != 0) return false;
  }
  return true;
}

/// Every vector of [-bound, bound]^n, in odometer order.
template <class F>
void for_each_box_vector(std::size_t n, int bound, F&& f) {
  Vector v(n, -bound);
  while (true) {
    f(v);
    std::size_t i = 0;
    while (i < n && v[i] == bound) v[i++] = -bound;
    if (i == n) return;
    ++v[i];
  }
}

// ---------------------------------------------------------------------------
// Manifold generators.

inline fourfold::manifold::Block random_block(Rng& rng, bool smooth_only = false) {
  using fourfold::manifold::Block;
  const int hi = smooth_only ? 8 : 13;
  switch (pick(rng, 0, hi)) {
    case 0: return Block::cp2();
    case 1: return Block::neg_cp2();
    case 2: return Block::s2xs2();
    case 3: return Block::k3();
    case 4: return Block::neg_k3();
    case 5: return Block::enriques();
    case 6: return Block::s1xy(pick(rng, 0, 3));
    case 7: return Block::s2xsigma(pick(rng, 1, 3));
    case 8: return Block::s4();
    case 9: return Block::e8(-1);
    case 10: return Block::e8(1);
    case 11: return Block::neg_cp2_fake();
    case 12: return Block::cp2_fake();
    default: return Block::w();
  }
}

inline std::vector<fourfold::manifold::Block> random_blocks(Rng& rng, int max_blocks,
                                                             bool smooth_only = false) {
  std::vector<fourfold::manifold::Block> out;
  const int n = pick(rng, 0, max_blocks);
  for (int i = 0; i < n; ++i) out.push_back(random_block(rng, smooth_only));
  return out;
}

// ---------------------------------------------------------------------------
// Exterior algebra oracle: monomials as sorted index lists, products by
// concatenation; a repeated index kills the term.

using NaiveTerm = std::tuple<std::vector<int>, int, int>;  // (indices, u, v)
using NaivePoly = std::map<NaiveTerm, int>;                // coefficient mod 2

inline NaivePoly to_naive(const fourfold::charpoly::ExtPoly& p) {
  NaivePoly out;
  for (const auto& m : p.terms()) {
    std::vector<int> idx;
    for (int i = 0; i < 32; ++i)
      if (m.mask & (1u << i)) idx.push_back(i + 1);
    out[{idx, m.u, m.v}] = 1;
  }
  return out;
}

inline NaivePoly naive_mul(const NaivePoly& a, const NaivePoly& b, bool u_squared_zero) {
  NaivePoly out;
  for (const auto& [ta, ca] : a)
    for (const auto& [tb, cb] : b) {
      std::vector<int> idx = std::get<0>(ta);
      idx.insert(idx.end(), std::get<0>(tb).begin(), std::get<0>(tb).end());
      std::sort(idx.begin(), idx.end());
      if (std::adjacent_find(idx.begin(), idx.end()) != idx.end()) continue;
      const int u = std::get<1>(ta) + std::get<1>(tb);
      if (u_squared_zero && u >= 2) continue;
      auto& c = out[{idx, u, std::get<2>(ta) + std::get<2>(tb)}];
      c = (c + ca * cb) % 2;
    }
  std::erase_if(out, [](const auto& kv) { return kv.second == 0; });
  return out;
}

inline fourfold::charpoly::ExtPoly random_poly(Rng& rng, int k, int terms, int u_lo, int u_hi,
                                               fourfold::charpoly::Ring ring =
                                                   fourfold::charpoly::Ring::Pm1,
                                               int v_hi = 0) {
  std::vector<fourfold::charpoly::Monomial> ms;
  const auto full = k == 0 ? 0u : ((k == 32 ? 0u : (1u << k)) - 1u);
  for (int i = 0; i < terms; ++i) {
    const auto mask = static_cast<std::uint32_t>(
        std::uniform_int_distribution<std::uint64_t>(0, full)(rng));
    ms.push_back({mask, pick(rng, u_lo, u_hi), pick(rng, 0, v_hi)});
  }
  return fourfold::charpoly::ExtPoly::from_terms(k, ring, ms);
}

}  // namespace support
