#pragma once

// Integer symmetric bilinear forms built as ordered direct sums of atoms.
//
// Atoms are the rank-1 forms (+1) and (-1), the hyperbolic plane, the
// rank-8 E8 form of either sign, and arbitrary integer symmetric matrices.
// Everything here is exact: signatures of raw matrices come from rational
// congruence diagonalization, squares are computed in checked 64-bit
// arithmetic.

#include <cstddef>
#include <cstdint>
#include <span>
#include <variant>
#include <vector>

namespace fourfold::lattice {

using Vector = std::vector<std::int64_t>;
using Matrix = std::vector<Vector>;

struct Diag {
  int sign = 1;
  bool operator==(const Diag&) const = default;
};

struct Hyperbolic {
  bool operator==(const Hyperbolic&) const = default;
};

struct E8 {
  int sign = -1;
  bool operator==(const E8&) const = default;
};

struct RawMatrix {
  Matrix entries;
  bool operator==(const RawMatrix&) const = default;
};

using Atom = std::variant<Diag, Hyperbolic, E8, RawMatrix>;

std::size_t atom_rank(const Atom& atom);
Matrix atom_gram(const Atom& atom);

/// Positive-definite E8 Cartan matrix (nodes 0..6 in a chain, node 7 on node 4).
const Matrix& e8_gram();

class IntersectionForm {
 public:
  IntersectionForm() = default;
  /// Throws InvalidForm for non-square / non-symmetric raw matrices or bad signs.
  explicit IntersectionForm(std::vector<Atom> summands);

  const std::vector<Atom>& summands() const noexcept { return summands_; }
  /// Lattice dimension: sum of atom ranks.
  std::size_t dimension() const noexcept { return dimension_; }
  /// Starting coordinate of each atom.
  std::vector<std::size_t> offsets() const;

  IntersectionForm direct_sum(const IntersectionForm& other) const;
  IntersectionForm operator+(const IntersectionForm& other) const {
    return direct_sum(other);
  }

  Matrix gram() const;

  bool operator==(const IntersectionForm& other) const {
    return summands_ == other.summands_;
  }

 private:
  std::vector<Atom> summands_;
  std::size_t dimension_ = 0;
};

enum class Parity { Even, Odd };
enum class Definiteness { Positive, Negative, Indefinite, Zero };

struct FormInvariants {
  std::size_t rank = 0;  // b_plus + b_minus
  std::int64_t signature = 0;
  std::size_t b_plus = 0;
  std::size_t b_minus = 0;
  std::size_t nullity = 0;
  Parity parity = Parity::Even;
  Definiteness definite = Definiteness::Zero;

  bool operator==(const FormInvariants&) const = default;
};

/// Result of exact congruence diagonalization of a symmetric integer matrix.
struct Diagonalization {
  std::size_t positive = 0;
  std::size_t negative = 0;
  std::size_t zero = 0;
  // Determinant, exact; rational in general but integral for integer input.
  std::int64_t determinant = 0;
};

Diagonalization diagonalize(const Matrix& symmetric);

FormInvariants invariants(const IntersectionForm& form,
                          bool unimodular_only = false);

std::int64_t pairing(const IntersectionForm& form,
                     std::span<const std::int64_t> v,
                     std::span<const std::int64_t> w);
std::int64_t square(const IntersectionForm& form,
                    std::span<const std::int64_t> v);
bool is_characteristic(const IntersectionForm& form,
                       std::span<const std::int64_t> v);

/// Mod-2 reduction of the characteristic coset: the unique bit vector w with
/// Q(w, x) = Q(x, x) mod 2 for all x. Requires odd determinant.
std::vector<std::uint8_t> characteristic_residue(const IntersectionForm& form);

struct NormalForm {
  Parity parity = Parity::Even;
  std::size_t e8_count = 0;
  int e8_sign = -1;
  std::size_t hyperbolic_count = 0;
  std::size_t plus_count = 0;
  std::size_t minus_count = 0;

  IntersectionForm to_form() const;
  bool operator==(const NormalForm&) const = default;
};

/// Indefinite unimodular forms up to isomorphism: even ones as
/// p E8 + q H, odd ones as a(+1) + b(-1). Zero-dimensional forms give the
/// empty even normal form.
NormalForm classify_indefinite(const IntersectionForm& form);

}  // namespace fourfold::lattice
