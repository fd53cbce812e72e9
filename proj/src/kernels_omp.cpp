#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <limits>

#include "fourfold/errors.hpp"
#include "fourfold/kernels.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace fourfold::kernels {

using charpoly::Monomial;

int max_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

std::vector<Monomial> exterior_product_parallel(std::span<const Monomial> a,
                                                std::span<const Monomial> b,
                                                const ProductRules& rules) {
  const auto na = static_cast<std::ptrdiff_t>(a.size());
  const int threads = max_threads();
  std::vector<std::vector<Monomial>> partial(static_cast<std::size_t>(threads));
  std::atomic<std::int32_t> overflow_u{0};
  std::atomic<bool> overflow{false};

#pragma omp parallel num_threads(threads)
  {
#ifdef _OPENMP
    auto& local = partial[static_cast<std::size_t>(omp_get_thread_num())];
#else
    auto& local = partial[0];
#endif
#pragma omp for schedule(dynamic, 16)
    for (std::ptrdiff_t i = 0; i < na; ++i) {
      const Monomial& x = a[static_cast<std::size_t>(i)];
      for (const auto& y : b) {
        if ((x.mask & y.mask) != 0) continue;
        const Monomial m{x.mask | y.mask, x.u + y.u, x.v + y.v};
        if (rules.truncate_u_squared && m.u >= 2) continue;
        if (std::abs(m.u) > rules.max_u_degree) {
          overflow_u.store(m.u);
          overflow.store(true);
          continue;
        }
        local.push_back(m);
      }
    }
  }
  if (overflow.load()) {
    throw Error(ErrorCode::UDegreeOverflow,
                "u-degree " + std::to_string(overflow_u.load()) + " exceeds cap " +
                    std::to_string(rules.max_u_degree));
  }

  std::vector<Monomial> all;
  std::size_t total = 0;
  for (const auto& p : partial) total += p.size();
  all.reserve(total);
  for (auto& p : partial) all.insert(all.end(), p.begin(), p.end());
  std::sort(all.begin(), all.end(), charpoly::canonical_less);

  // Keep monomials that occur an odd number of times.
  std::vector<Monomial> out;
  for (std::size_t i = 0; i < all.size();) {
    std::size_t j = i;
    while (j < all.size() && all[j] == all[i]) ++j;
    if ((j - i) % 2 == 1) out.push_back(all[i]);
    i = j;
  }
  return out;
}

ProductTable enumerate_product_parallel(std::span<const CandidateSet> sets) {
  ProductTable out;
  for (const auto& s : sets) out.width += s.width;
  for (const auto& s : sets) {
    if (s.size() == 0) return out;
  }
  const std::size_t total = product_size(sets, std::numeric_limits<std::size_t>::max());
  out.coords.assign(total * out.width, 0);
  out.squares.assign(total, 0);

  std::vector<std::size_t> stride(sets.size(), 1);
  for (std::size_t s = sets.size(); s-- > 1;) stride[s - 1] = stride[s] * sets[s].size();

  const auto n = static_cast<std::ptrdiff_t>(total);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t row = 0; row < n; ++row) {
    std::size_t rest = static_cast<std::size_t>(row);
    std::int64_t sq = 0;
    std::size_t col = static_cast<std::size_t>(row) * out.width;
    for (std::size_t s = 0; s < sets.size(); ++s) {
      const std::size_t d = rest / stride[s];
      rest %= stride[s];
      const auto& set = sets[s];
      std::copy_n(set.coords.begin() + static_cast<std::ptrdiff_t>(d * set.width), set.width,
                  out.coords.begin() + static_cast<std::ptrdiff_t>(col));
      col += set.width;
      sq += set.squares[d];
    }
    out.squares[static_cast<std::size_t>(row)] = sq;
  }
  return out;
}

}  // namespace fourfold::kernels
