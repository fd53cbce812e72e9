#include "fourfold/lattice.hpp"

#include <algorithm>
#include <boost/multiprecision/cpp_int.hpp>
#include <string>
#include <utility>

#include "fourfold/detail/checked.hpp"
#include "fourfold/errors.hpp"

namespace fourfold::lattice {

namespace {

using Rational = boost::multiprecision::cpp_rational;

template <class... Fs>
struct Overloaded : Fs... {
  using Fs::operator()...;
};
template <class... Fs>
Overloaded(Fs...) -> Overloaded<Fs...>;

void validate_atom(const Atom& atom) {
  std::visit(
      Overloaded{
          [](const Diag& d) {
            if (d.sign != 1 && d.sign != -1) {
              throw Error(ErrorCode::InvalidForm, "Diag sign must be +1 or -1");
            }
          },
          [](const Hyperbolic&) {},
          [](const E8& e) {
            if (e.sign != 1 && e.sign != -1) {
              throw Error(ErrorCode::InvalidForm, "E8 sign must be +1 or -1");
            }
          },
          [](const RawMatrix& m) {
            const auto n = m.entries.size();
            for (std::size_t i = 0; i < n; ++i) {
              if (m.entries[i].size() != n) {
                throw Error(ErrorCode::InvalidForm, "raw matrix is not square");
              }
            }
            for (std::size_t i = 0; i < n; ++i) {
              for (std::size_t j = 0; j < i; ++j) {
                if (m.entries[i][j] != m.entries[j][i]) {
                  throw Error(ErrorCode::InvalidForm,
                              "raw matrix is not symmetric");
                }
              }
            }
          },
      },
      atom);
}

Vector matvec(const Matrix& g, std::span<const std::int64_t> v) {
  Vector out(g.size(), 0);
  for (std::size_t i = 0; i < g.size(); ++i) {
    std::int64_t acc = 0;
    for (std::size_t j = 0; j < g.size(); ++j) {
      if (g[i][j] != 0 && v[j] != 0) {
        acc = detail::checked_add(acc, detail::checked_mul(g[i][j], v[j]));
      }
    }
    out[i] = acc;
  }
  return out;
}

std::int64_t atom_pairing(const Atom& atom, std::span<const std::int64_t> v,
                          std::span<const std::int64_t> w) {
  using detail::checked_add;
  using detail::checked_mul;
  return std::visit(
      Overloaded{
          [&](const Diag& d) { return checked_mul(d.sign, checked_mul(v[0], w[0])); },
          [&](const Hyperbolic&) {
            return checked_add(checked_mul(v[0], w[1]), checked_mul(v[1], w[0]));
          },
          [&](const auto&) {
            const Matrix g = atom_gram(atom);
            const Vector gw = matvec(g, w);
            std::int64_t acc = 0;
            for (std::size_t i = 0; i < gw.size(); ++i) {
              acc = checked_add(acc, checked_mul(v[i], gw[i]));
            }
            return acc;
          },
      },
      atom);
}

// Gaussian elimination over GF(2); returns a solution of A x = b or throws.
std::vector<std::uint8_t> solve_gf2(Matrix a, std::vector<std::uint8_t> b) {
  const std::size_t n = a.size();
  std::vector<std::vector<std::uint8_t>> m(n, std::vector<std::uint8_t>(n + 1));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) m[i][j] = static_cast<std::uint8_t>(a[i][j] & 1);
    m[i][n] = b[i] & 1;
  }
  std::vector<std::size_t> pivot_col;
  std::size_t row = 0;
  for (std::size_t col = 0; col < n && row < n; ++col) {
    std::size_t p = row;
    while (p < n && m[p][col] == 0) ++p;
    if (p == n) continue;
    std::swap(m[p], m[row]);
    for (std::size_t r = 0; r < n; ++r) {
      if (r != row && m[r][col]) {
        for (std::size_t c = col; c <= n; ++c) m[r][c] ^= m[row][c];
      }
    }
    pivot_col.push_back(col);
    ++row;
  }
  for (std::size_t r = row; r < n; ++r) {
    if (m[r][n]) {
      throw Error(ErrorCode::DegenerateForm,
                  "no characteristic residue: form is degenerate mod 2");
    }
  }
  std::vector<std::uint8_t> x(n, 0);
  for (std::size_t r = 0; r < pivot_col.size(); ++r) x[pivot_col[r]] = m[r][n];
  return x;
}

}  // namespace

const Matrix& e8_gram() {
  static const Matrix gram = [] {
    Matrix g(8, Vector(8, 0));
    for (std::size_t i = 0; i < 8; ++i) g[i][i] = 2;
    auto link = [&](std::size_t a, std::size_t b) { g[a][b] = g[b][a] = -1; };
    for (std::size_t i = 0; i + 1 < 7; ++i) link(i, i + 1);
    link(4, 7);
    return g;
  }();
  return gram;
}

std::size_t atom_rank(const Atom& atom) {
  return std::visit(Overloaded{
                        [](const Diag&) -> std::size_t { return 1; },
                        [](const Hyperbolic&) -> std::size_t { return 2; },
                        [](const E8&) -> std::size_t { return 8; },
                        [](const RawMatrix& m) { return m.entries.size(); },
                    },
                    atom);
}

Matrix atom_gram(const Atom& atom) {
  return std::visit(Overloaded{
                        [](const Diag& d) { return Matrix{{d.sign}}; },
                        [](const Hyperbolic&) { return Matrix{{0, 1}, {1, 0}}; },
                        [](const E8& e) {
                          Matrix g = e8_gram();
                          if (e.sign < 0) {
                            for (auto& row : g) {
                              for (auto& x : row) x = -x;
                            }
                          }
                          return g;
                        },
                        [](const RawMatrix& m) { return m.entries; },
                    },
                    atom);
}

IntersectionForm::IntersectionForm(std::vector<Atom> summands)
    : summands_(std::move(summands)) {
  for (const auto& atom : summands_) {
    validate_atom(atom);
    dimension_ += atom_rank(atom);
  }
}

std::vector<std::size_t> IntersectionForm::offsets() const {
  std::vector<std::size_t> out;
  out.reserve(summands_.size());
  std::size_t at = 0;
  for (const auto& atom : summands_) {
    out.push_back(at);
    at += atom_rank(atom);
  }
  return out;
}

IntersectionForm IntersectionForm::direct_sum(const IntersectionForm& other) const {
  std::vector<Atom> all = summands_;
  all.insert(all.end(), other.summands_.begin(), other.summands_.end());
  return IntersectionForm(std::move(all));
}

Matrix IntersectionForm::gram() const {
  Matrix g(dimension_, Vector(dimension_, 0));
  std::size_t at = 0;
  for (const auto& atom : summands_) {
    const Matrix block = atom_gram(atom);
    for (std::size_t i = 0; i < block.size(); ++i) {
      for (std::size_t j = 0; j < block.size(); ++j) g[at + i][at + j] = block[i][j];
    }
    at += block.size();
  }
  return g;
}

Diagonalization diagonalize(const Matrix& symmetric) {
  const std::size_t n = symmetric.size();
  std::vector<std::vector<Rational>> a(n, std::vector<Rational>(n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) a[i][j] = symmetric[i][j];
  }
  auto swap_index = [&](std::size_t i, std::size_t j) {
    if (i == j) return;
    std::swap(a[i], a[j]);
    for (auto& row : a) std::swap(row[i], row[j]);
  };

  Diagonalization out;
  Rational det = 1;
  std::size_t k = 0;
  for (; k < n; ++k) {
    std::size_t p = k;
    while (p < n && a[p][p] == 0) ++p;
    if (p == n) {
      // All remaining diagonal entries vanish; use an off-diagonal entry.
      std::size_t pi = n, pj = n;
      for (std::size_t i = k; i < n && pi == n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
          if (a[i][j] != 0) {
            pi = i;
            pj = j;
            break;
          }
        }
      }
      if (pi == n) break;  // remaining block is zero
      // e_i <- e_i + e_j gives Q(e_i, e_i) = 2 Q(e_i, e_j) != 0.
      for (std::size_t c = 0; c < n; ++c) a[pi][c] += a[pj][c];
      for (std::size_t r = 0; r < n; ++r) a[r][pi] += a[r][pj];
      p = pi;
    }
    swap_index(p, k);
    const Rational pivot = a[k][k];
    det *= pivot;
    if (pivot > 0) {
      ++out.positive;
    } else {
      ++out.negative;
    }
    for (std::size_t r = k + 1; r < n; ++r) {
      if (a[r][k] == 0) continue;
      const Rational f = a[r][k] / pivot;
      for (std::size_t c = k; c < n; ++c) a[r][c] -= f * a[k][c];
      for (std::size_t c = k; c < n; ++c) a[c][r] = a[r][c];
    }
  }
  out.zero = n - k;
  if (out.zero > 0) det = 0;
  // Congruence by unimodular moves keeps the determinant integral.
  out.determinant = static_cast<std::int64_t>(boost::multiprecision::numerator(det));
  return out;
}

FormInvariants invariants(const IntersectionForm& form, bool unimodular_only) {
  FormInvariants inv;
  bool odd = false;
  for (const auto& atom : form.summands()) {
    std::visit(Overloaded{
                   [&](const Diag& d) {
                     (d.sign > 0 ? inv.b_plus : inv.b_minus) += 1;
                     odd = true;
                   },
                   [&](const Hyperbolic&) {
                     inv.b_plus += 1;
                     inv.b_minus += 1;
                   },
                   [&](const E8& e) { (e.sign > 0 ? inv.b_plus : inv.b_minus) += 8; },
                   [&](const RawMatrix& m) {
                     const Diagonalization d = diagonalize(m.entries);
                     if (unimodular_only && d.zero > 0) {
                       throw Error(ErrorCode::DegenerateForm,
                                   "raw matrix is singular");
                     }
                     inv.b_plus += d.positive;
                     inv.b_minus += d.negative;
                     inv.nullity += d.zero;
                     for (std::size_t i = 0; i < m.entries.size(); ++i) {
                       if (m.entries[i][i] % 2 != 0) odd = true;
                     }
                   },
               },
               atom);
  }
  inv.rank = inv.b_plus + inv.b_minus;
  inv.signature = static_cast<std::int64_t>(inv.b_plus) -
                  static_cast<std::int64_t>(inv.b_minus);
  inv.parity = odd ? Parity::Odd : Parity::Even;
  if (inv.b_plus > 0 && inv.b_minus > 0) {
    inv.definite = Definiteness::Indefinite;
  } else if (inv.b_plus > 0) {
    inv.definite = Definiteness::Positive;
  } else if (inv.b_minus > 0) {
    inv.definite = Definiteness::Negative;
  } else {
    inv.definite = Definiteness::Zero;
  }
  return inv;
}

std::int64_t pairing(const IntersectionForm& form, std::span<const std::int64_t> v,
                     std::span<const std::int64_t> w) {
  if (v.size() != form.dimension() || w.size() != form.dimension()) {
    throw Error(ErrorCode::DimensionMismatch,
                "vector length " + std::to_string(v.size()) + "/" +
                    std::to_string(w.size()) + " does not match form rank " +
                    std::to_string(form.dimension()));
  }
  std::int64_t acc = 0;
  std::size_t at = 0;
  for (const auto& atom : form.summands()) {
    const std::size_t r = atom_rank(atom);
    acc = detail::checked_add(acc, atom_pairing(atom, v.subspan(at, r), w.subspan(at, r)));
    at += r;
  }
  return acc;
}

std::int64_t square(const IntersectionForm& form, std::span<const std::int64_t> v) {
  return pairing(form, v, v);
}

bool is_characteristic(const IntersectionForm& form, std::span<const std::int64_t> v) {
  if (v.size() != form.dimension()) {
    throw Error(ErrorCode::DimensionMismatch,
                "vector length " + std::to_string(v.size()) +
                    " does not match form rank " + std::to_string(form.dimension()));
  }
  // Q(x, x) mod 2 is linear in x, so checking basis vectors suffices.
  std::size_t at = 0;
  for (const auto& atom : form.summands()) {
    const Matrix g = atom_gram(atom);
    const Vector gv = matvec(g, v.subspan(at, g.size()));
    for (std::size_t i = 0; i < g.size(); ++i) {
      if (((gv[i] - g[i][i]) % 2) != 0) return false;
    }
    at += g.size();
  }
  return true;
}

std::vector<std::uint8_t> characteristic_residue(const IntersectionForm& form) {
  std::vector<std::uint8_t> out;
  out.reserve(form.dimension());
  for (const auto& atom : form.summands()) {
    std::visit(Overloaded{
                   [&](const Diag&) { out.push_back(1); },
                   [&](const Hyperbolic&) { out.insert(out.end(), 2, 0); },
                   [&](const E8&) { out.insert(out.end(), 8, 0); },
                   [&](const RawMatrix& m) {
                     std::vector<std::uint8_t> diag;
                     for (std::size_t i = 0; i < m.entries.size(); ++i) {
                       diag.push_back(static_cast<std::uint8_t>(m.entries[i][i] & 1));
                     }
                     const auto x = solve_gf2(m.entries, diag);
                     out.insert(out.end(), x.begin(), x.end());
                   },
               },
               atom);
  }
  return out;
}

IntersectionForm NormalForm::to_form() const {
  std::vector<Atom> atoms;
  for (std::size_t i = 0; i < e8_count; ++i) atoms.emplace_back(E8{e8_sign});
  for (std::size_t i = 0; i < hyperbolic_count; ++i) atoms.emplace_back(Hyperbolic{});
  for (std::size_t i = 0; i < plus_count; ++i) atoms.emplace_back(Diag{1});
  for (std::size_t i = 0; i < minus_count; ++i) atoms.emplace_back(Diag{-1});
  return IntersectionForm(std::move(atoms));
}

NormalForm classify_indefinite(const IntersectionForm& form) {
  const FormInvariants inv = invariants(form, /*unimodular_only=*/true);
  NormalForm out;
  if (form.dimension() == 0) return out;
  if (inv.definite != Definiteness::Indefinite) {
    throw Error(ErrorCode::DefiniteFormUnsupported,
                "classification of definite forms is not supported");
  }
  for (const auto& atom : form.summands()) {
    if (const auto* raw = std::get_if<RawMatrix>(&atom)) {
      const auto d = diagonalize(raw->entries);
      if (d.determinant != 1 && d.determinant != -1) {
        throw Error(ErrorCode::DegenerateForm,
                    "raw matrix is not unimodular (det " +
                        std::to_string(d.determinant) + ")");
      }
    }
  }
  out.parity = inv.parity;
  if (inv.parity == Parity::Even) {
    const std::int64_t s = inv.signature;
    out.e8_count = static_cast<std::size_t>((s < 0 ? -s : s) / 8);
    out.e8_sign = s > 0 ? 1 : -1;
    out.hyperbolic_count = std::min(inv.b_plus, inv.b_minus);
  } else {
    out.plus_count = inv.b_plus;
    out.minus_count = inv.b_minus;
  }
  return out;
}

}  // namespace fourfold::lattice
