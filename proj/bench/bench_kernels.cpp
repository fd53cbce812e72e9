// Serial reference vs OpenMP kernels on the two hot loops.

#include <chrono>
#include <cstdio>
#include <random>
#include <vector>

#include "fourfold/charpoly.hpp"
#include "fourfold/cover.hpp"
#include "fourfold/kernels.hpp"
#include "fourfold/manifold.hpp"

using Clock = std::chrono::steady_clock;

template <class F>
double best_ms(F&& f, int reps) {
  double best = 1e300;
  for (int r = 0; r < reps; ++r) {
    const auto t0 = Clock::now();
    f();
    const std::chrono::duration<double, std::milli> dt = Clock::now() - t0;
    best = std::min(best, dt.count());
  }
  return best;
}

int main() {
  using namespace fourfold;
  std::printf("threads: %d\n", kernels::max_threads());

  // Exterior products of dense random polynomials.
  std::mt19937_64 rng(7);
  const int k = 12;
  auto random_poly = [&](std::size_t terms) {
    std::vector<charpoly::Monomial> ms;
    std::uniform_int_distribution<std::uint32_t> mask(0, (1u << k) - 1);
    std::uniform_int_distribution<int> u(0, 6);
    for (std::size_t i = 0; i < terms; ++i) ms.push_back({mask(rng), u(rng), 0});
    return charpoly::ExtPoly::from_terms(k, charpoly::Ring::Pm1, ms);
  };
  const auto a = random_poly(1500), b = random_poly(1500);
  charpoly::ExtPoly ser(k), par(k);
  const double t_ser = best_ms([&] { ser = charpoly::mul_serial(a, b); }, 3);
  const double t_par = best_ms([&] { par = charpoly::mul(a, b); }, 3);
  std::printf("exterior product %zux%zu terms: serial %.2f ms, parallel %.2f ms, %s\n",
              a.terms().size(), b.terms().size(), t_ser, t_par,
              ser == par ? "identical" : "MISMATCH");

  // Characteristic-class enumeration over a large odd form.
  const auto x = manifold::ManifoldExpr(
      {manifold::Block::e8(-1), manifold::Block::cp2(), manifold::Block::neg_cp2(),
       manifold::Block::neg_cp2(), manifold::Block::neg_cp2(), manifold::Block::s1xy(0)});
  const auto ls = cover::build_paper_cover(x);
  std::vector<cover::CharClass> cs, cp;
  const double e_ser = best_ms([&] { cs = cover::enumerate_characteristics_serial(ls, 3); }, 3);
  const double e_par = best_ms([&] { cp = cover::enumerate_characteristics(ls, 3); }, 3);
  std::printf("characteristic enumeration (%zu classes): serial %.2f ms, parallel %.2f ms, %s\n",
              cs.size(), e_ser, e_par, cs == cp ? "identical" : "MISMATCH");
  return ser == par && cs == cp ? 0 : 1;
}
