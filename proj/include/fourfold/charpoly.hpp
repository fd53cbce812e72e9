#pragma once

// Mod-2 characteristic-class algebra over a torus T^k.
//
// H*(T^k; Z2) is the exterior algebra on degree-1 generators t_1..t_k. The
// Borel rings used by the obstruction checks are
//   pm1 ring:  Lambda[t] (x) Z2[u]            (G = {+-1}, deg u = 1)
//   C4 ring:   Lambda[t] (x) Z2[u, v] / u^2    (G = C4,   deg v = 2)
// The pm1 ring also admits negative u-powers so that Laurent quotients can be
// formed and inspected.

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "fourfold/monomial.hpp"

namespace fourfold::charpoly {

enum class Ring { Pm1, C4 };

enum class EulerMode {
  Pm1,       // {+-1} acting by -1 on the fibres: sum w_{m-i} u^i
  Pm1Fixed,  // trivial action: the top Stiefel-Whitney class
  C4Spinor,  // complex bundle with j-action: sum c_{r-i} v^i
  C4Sign,    // {+-1}-bundle pulled back to the C4 ring: w_m + w_{m-1} u
};

inline constexpr int kDefaultMaxUDegree = 64;
/// Process-wide |u|-degree cap; exceeding it raises UDegreeOverflow.
void set_max_u_degree(int cap);
int max_u_degree();

class ExtPoly {
 public:
  explicit ExtPoly(int generators = 0, Ring ring = Ring::Pm1);

  static ExtPoly one(int generators, Ring ring = Ring::Pm1);
  /// t_i, 1-based.
  static ExtPoly t(int generators, int i, Ring ring = Ring::Pm1);
  static ExtPoly u_power(int generators, int exponent, Ring ring = Ring::Pm1);
  static ExtPoly v_power(int generators, int exponent);
  static ExtPoly from_terms(int generators, Ring ring, std::vector<Monomial> terms);
  /// Canonical text syntax: "t1*t2*u^2 + v + 1", "0" for zero.
  static ExtPoly parse(std::string_view text, int generators, Ring ring = Ring::Pm1);

  int generators() const noexcept { return generators_; }
  Ring ring() const noexcept { return ring_; }
  const std::vector<Monomial>& terms() const noexcept { return terms_; }
  bool is_zero() const noexcept { return terms_.empty(); }
  bool is_one() const noexcept;

  ExtPoly operator+(const ExtPoly& other) const;
  ExtPoly operator*(const ExtPoly& other) const;
  ExtPoly& operator+=(const ExtPoly& other) { return *this = *this + other; }

  /// Component of total degree |S| + a + 2b.
  ExtPoly homogeneous(int degree) const;
  /// Coefficient of u^e, returned with the u-factor removed.
  ExtPoly u_coefficient(int exponent) const;
  ExtPoly shift_u(int exponent) const;
  int max_u() const;  // requires non-zero
  int min_u() const;
  /// Same terms in another ring (u^2 terms drop when moving to C4).
  ExtPoly in_ring(Ring ring) const;

  std::string to_string() const;

  bool operator==(const ExtPoly&) const = default;

 private:
  int generators_;
  Ring ring_;
  std::vector<Monomial> terms_;  // canonical order, no repeats
};

/// Graded-commutative product; throws ModeMismatch on differing k or ring.
ExtPoly mul(const ExtPoly& a, const ExtPoly& b);
/// Same product through the serial reference kernel.
ExtPoly mul_serial(const ExtPoly& a, const ExtPoly& b);

std::string render_monomial(const Monomial& m);

struct BundleClassData {
  int generators = 0;
  std::size_t rank = 0;
  bool complex = false;  // classes are mod-2 Chern classes c_i (degree 2i)
  std::vector<ExtPoly> classes;  // classes[i - 1] = w_i; size() == rank

  /// w_0 = 1; zero above the rank.
  ExtPoly w(std::size_t i) const;
  ExtPoly total() const;
  /// Throws RankMismatch unless classes.size() == rank and deg(w_i) matches.
  void validate() const;

  static BundleClassData trivial(int generators, std::size_t rank, bool complex = false);
  /// Split a total class 1 + w_1 + w_2 + ... into degree components.
  static BundleClassData from_total(int generators, std::size_t rank, const ExtPoly& total);
};

ExtPoly equivariant_euler(const BundleClassData& bundle, EulerMode mode);

/// Bundle of line summands with w_1 = sum of t_i over each subset, plus a
/// trivial summand: total class prod (1 + sum_{i in S} t_i).
BundleClassData total_sw_line_sum(int generators,
                                  const std::vector<std::vector<int>>& lines,
                                  std::size_t trivial_rank);

/// w(num) * w(den)^{-1}, by degree 0..generators.
std::vector<ExtPoly> virtual_sw(const BundleClassData& numerator,
                                const BundleClassData& denominator);

struct LaurentQuotient {
  ExtPoly quotient;
  bool has_negative_u = false;
};

/// Exact division in Lambda[u, u^-1] by a denominator monic in u.
LaurentQuotient laurent_divide(const ExtPoly& numerator, const ExtPoly& denominator);

}  // namespace fourfold::charpoly
