#include "fourfold/charpoly.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <utility>

#include "fourfold/errors.hpp"
#include "fourfold/kernels.hpp"

namespace fourfold::charpoly {

namespace {

std::atomic<int> g_max_u_degree{kDefaultMaxUDegree};

void check_compatible(const ExtPoly& a, const ExtPoly& b) {
  if (a.generators() != b.generators()) {
    throw Error(ErrorCode::ModeMismatch,
                "generator count mismatch: " + std::to_string(a.generators()) + " vs " +
                    std::to_string(b.generators()));
  }
  if (a.ring() != b.ring()) {
    throw Error(ErrorCode::ModeMismatch, "ring mismatch (pm1 vs C4)");
  }
}

void check_u(const Monomial& m, Ring ring) {
  if (std::abs(m.u) > g_max_u_degree.load()) {
    throw Error(ErrorCode::UDegreeOverflow,
                "u-degree " + std::to_string(m.u) + " exceeds cap " +
                    std::to_string(g_max_u_degree.load()));
  }
  if (ring == Ring::C4 && m.u < 0) {
    throw Error(ErrorCode::ModeMismatch, "negative u-powers exist only in the pm1 ring");
  }
}

kernels::ProductRules rules_for(Ring ring) {
  return {ring == Ring::C4, g_max_u_degree.load()};
}

// Sort and cancel repeated monomials mod 2.
std::vector<Monomial> reduce(std::vector<Monomial> terms, Ring ring) {
  std::erase_if(terms, [&](const Monomial& m) { return ring == Ring::C4 && m.u >= 2; });
  std::sort(terms.begin(), terms.end(), canonical_less);
  std::vector<Monomial> out;
  for (std::size_t i = 0; i < terms.size();) {
    std::size_t j = i;
    while (j < terms.size() && terms[j] == terms[i]) ++j;
    if ((j - i) % 2 == 1) out.push_back(terms[i]);
    i = j;
  }
  return out;
}

std::string power(char symbol, int e) {
  std::string s(1, symbol);
  if (e != 1) s += "^" + std::to_string(e);
  return s;
}

}  // namespace

void set_max_u_degree(int cap) {
  if (cap < 1) throw Error(ErrorCode::UDegreeOverflow, "u-degree cap must be positive");
  g_max_u_degree.store(cap);
}

int max_u_degree() { return g_max_u_degree.load(); }

ExtPoly::ExtPoly(int generators, Ring ring) : generators_(generators), ring_(ring) {
  if (generators < 0 || generators > 32) {
    throw Error(ErrorCode::ModeMismatch, "generator count must lie in [0, 32]");
  }
}

ExtPoly ExtPoly::one(int generators, Ring ring) {
  return from_terms(generators, ring, {Monomial{}});
}

ExtPoly ExtPoly::t(int generators, int i, Ring ring) {
  if (i < 1 || i > generators) {
    throw Error(ErrorCode::ModeMismatch, "generator t" + std::to_string(i) +
                                             " outside 1.." + std::to_string(generators));
  }
  return from_terms(generators, ring, {Monomial{1u << (i - 1), 0, 0}});
}

ExtPoly ExtPoly::u_power(int generators, int exponent, Ring ring) {
  return from_terms(generators, ring, {Monomial{0, exponent, 0}});
}

ExtPoly ExtPoly::v_power(int generators, int exponent) {
  return from_terms(generators, Ring::C4, {Monomial{0, 0, exponent}});
}

ExtPoly ExtPoly::from_terms(int generators, Ring ring, std::vector<Monomial> terms) {
  ExtPoly p(generators, ring);
  const std::uint32_t allowed =
      generators == 32 ? ~0u : ((1u << generators) - 1u);
  for (const auto& m : terms) {
    if ((m.mask & ~allowed) != 0) {
      throw Error(ErrorCode::ModeMismatch, "monomial uses a generator beyond t" +
                                               std::to_string(generators));
    }
    if (m.v < 0) throw Error(ErrorCode::ModeMismatch, "negative v-power");
    if (ring == Ring::Pm1 && m.v != 0) {
      throw Error(ErrorCode::ModeMismatch, "v exists only in the C4 ring");
    }
    check_u(m, ring);
  }
  p.terms_ = reduce(std::move(terms), ring);
  return p;
}

bool ExtPoly::is_one() const noexcept {
  return terms_.size() == 1 && terms_[0] == Monomial{};
}

ExtPoly ExtPoly::operator+(const ExtPoly& other) const {
  check_compatible(*this, other);
  std::vector<Monomial> all = terms_;
  all.insert(all.end(), other.terms_.begin(), other.terms_.end());
  ExtPoly out(generators_, ring_);
  out.terms_ = reduce(std::move(all), ring_);
  return out;
}

ExtPoly ExtPoly::operator*(const ExtPoly& other) const { return mul(*this, other); }

ExtPoly ExtPoly::homogeneous(int degree) const {
  ExtPoly out(generators_, ring_);
  std::copy_if(terms_.begin(), terms_.end(), std::back_inserter(out.terms_),
               [&](const Monomial& m) { return m.degree() == degree; });
  return out;
}

ExtPoly ExtPoly::u_coefficient(int exponent) const {
  std::vector<Monomial> picked;
  for (const auto& m : terms_) {
    if (m.u == exponent) picked.push_back({m.mask, 0, m.v});
  }
  ExtPoly out(generators_, ring_);
  out.terms_ = reduce(std::move(picked), ring_);
  return out;
}

ExtPoly ExtPoly::shift_u(int exponent) const {
  std::vector<Monomial> shifted;
  shifted.reserve(terms_.size());
  for (const auto& m : terms_) shifted.push_back({m.mask, m.u + exponent, m.v});
  return from_terms(generators_, ring_, std::move(shifted));
}

int ExtPoly::max_u() const {
  if (terms_.empty()) throw Error(ErrorCode::ModeMismatch, "max_u of the zero polynomial");
  return terms_.back().u;
}

int ExtPoly::min_u() const {
  if (terms_.empty()) throw Error(ErrorCode::ModeMismatch, "min_u of the zero polynomial");
  return terms_.front().u;
}

ExtPoly ExtPoly::in_ring(Ring ring) const {
  return from_terms(generators_, ring, terms_);
}

std::string render_monomial(const Monomial& m) {
  std::string out;
  auto add = [&](const std::string& factor) {
    if (!out.empty()) out += "*";
    out += factor;
  };
  for (int i = 0; i < 32; ++i) {
    if (m.mask & (1u << i)) add("t" + std::to_string(i + 1));
  }
  if (m.u != 0) add(power('u', m.u));
  if (m.v != 0) add(power('v', m.v));
  return out.empty() ? "1" : out;
}

std::string ExtPoly::to_string() const {
  if (terms_.empty()) return "0";
  std::string out;
  for (const auto& m : terms_) {
    if (!out.empty()) out += " + ";
    out += render_monomial(m);
  }
  return out;
}

ExtPoly ExtPoly::parse(std::string_view text, int generators, Ring ring) {
  std::size_t pos = 0;
  auto skip_ws = [&] {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  };
  auto fail = [&](const std::string& what) -> void {
    throw ParseFailure(ErrorCode::ParseError, what, pos);
  };
  auto read_int = [&]() -> int {
    const std::size_t start = pos;
    if (pos < text.size() && text[pos] == '-') ++pos;
    while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
    if (pos == start || (pos == start + 1 && text[start] == '-')) fail("expected integer");
    return std::stoi(std::string(text.substr(start, pos - start)));
  };

  std::vector<Monomial> terms;
  bool zero_literal = false;
  skip_ws();
  if (pos == text.size()) fail("empty polynomial");
  while (true) {
    skip_ws();
    Monomial m;
    bool vanished = false;
    bool constant = false;
    while (true) {
      skip_ws();
      if (pos >= text.size()) fail("expected factor");
      const char c = text[pos];
      if (c == 't') {
        ++pos;
        const int i = read_int();
        if (i < 1 || i > generators) fail("generator t" + std::to_string(i) + " out of range");
        const std::uint32_t bit = 1u << (i - 1);
        if (m.mask & bit) vanished = true;
        m.mask |= bit;
      } else if (c == 'u' || c == 'v') {
        ++pos;
        int e = 1;
        if (pos < text.size() && text[pos] == '^') {
          ++pos;
          e = read_int();
        }
        (c == 'u' ? m.u : m.v) += e;
      } else if (c == '1') {
        ++pos;
        constant = true;
      } else if (c == '0') {
        ++pos;
        zero_literal = true;
        vanished = true;
      } else {
        fail(std::string("unexpected character '") + c + "'");
      }
      skip_ws();
      if (pos < text.size() && text[pos] == '*') {
        ++pos;
        continue;
      }
      break;
    }
    (void)constant;
    if (!vanished) terms.push_back(m);
    skip_ws();
    if (pos == text.size()) break;
    if (text[pos] != '+') fail("expected '+'");
    ++pos;
  }
  (void)zero_literal;
  return from_terms(generators, ring, std::move(terms));
}

ExtPoly mul(const ExtPoly& a, const ExtPoly& b) {
  check_compatible(a, b);
  return ExtPoly::from_terms(
      a.generators(), a.ring(),
      kernels::exterior_product_parallel(a.terms(), b.terms(), rules_for(a.ring())));
}

ExtPoly mul_serial(const ExtPoly& a, const ExtPoly& b) {
  check_compatible(a, b);
  return ExtPoly::from_terms(
      a.generators(), a.ring(),
      kernels::exterior_product_serial(a.terms(), b.terms(), rules_for(a.ring())));
}

// ---------------------------------------------------------------------------

ExtPoly BundleClassData::w(std::size_t i) const {
  if (i == 0) return ExtPoly::one(generators);
  if (i > classes.size()) return ExtPoly(generators);
  return classes[i - 1];
}

ExtPoly BundleClassData::total() const {
  ExtPoly out = ExtPoly::one(generators);
  for (const auto& c : classes) out += c;
  return out;
}

void BundleClassData::validate() const {
  if (classes.size() != rank) {
    throw Error(ErrorCode::RankMismatch, "bundle of rank " + std::to_string(rank) + " lists " +
                                             std::to_string(classes.size()) + " classes");
  }
  const int step = complex ? 2 : 1;
  for (std::size_t i = 0; i < classes.size(); ++i) {
    const ExtPoly& c = classes[i];
    if (c.generators() != generators || c.ring() != Ring::Pm1) {
      throw Error(ErrorCode::ModeMismatch, "class w_" + std::to_string(i + 1) +
                                               " lives in a different ring");
    }
    for (const auto& m : c.terms()) {
      if (m.u != 0 || m.v != 0 ||
          m.lambda_degree() != step * static_cast<int>(i + 1)) {
        throw Error(ErrorCode::RankMismatch,
                    "class " + std::to_string(i + 1) + " has a term of wrong degree: " +
                        render_monomial(m));
      }
    }
  }
}

BundleClassData BundleClassData::trivial(int generators, std::size_t rank, bool complex) {
  BundleClassData out{generators, rank, complex, {}};
  out.classes.assign(rank, ExtPoly(generators));
  return out;
}

BundleClassData BundleClassData::from_total(int generators, std::size_t rank,
                                            const ExtPoly& total) {
  BundleClassData out{generators, rank, false, {}};
  for (std::size_t i = 1; i <= rank; ++i) {
    out.classes.push_back(total.homogeneous(static_cast<int>(i)));
  }
  for (int d = static_cast<int>(rank) + 1; d <= generators; ++d) {
    if (!total.homogeneous(d).is_zero()) {
      throw Error(ErrorCode::RankMismatch,
                  "total class has a component of degree " + std::to_string(d) +
                      " above rank " + std::to_string(rank));
    }
  }
  return out;
}

ExtPoly equivariant_euler(const BundleClassData& bundle, EulerMode mode) {
  bundle.validate();
  const int k = bundle.generators;
  const auto m = bundle.rank;
  const bool wants_complex = mode == EulerMode::C4Spinor;
  if (bundle.complex != wants_complex) {
    throw Error(ErrorCode::ModeMismatch,
                wants_complex ? "C4 spinor Euler class needs complex class data"
                              : "real Euler class needs Stiefel-Whitney data");
  }
  switch (mode) {
    case EulerMode::Pm1: {
      ExtPoly out(k, Ring::Pm1);
      for (std::size_t i = 0; i <= m; ++i) {
        out += bundle.w(m - i) * ExtPoly::u_power(k, static_cast<int>(i));
      }
      return out;
    }
    case EulerMode::Pm1Fixed:
      return bundle.w(m);
    case EulerMode::C4Sign: {
      ExtPoly out(k, Ring::C4);
      for (std::size_t i = 0; i <= std::min<std::size_t>(m, 1); ++i) {
        out += bundle.w(m - i).in_ring(Ring::C4) *
               ExtPoly::u_power(k, static_cast<int>(i), Ring::C4);
      }
      return out;
    }
    case EulerMode::C4Spinor: {
      ExtPoly out(k, Ring::C4);
      for (std::size_t i = 0; i <= m; ++i) {
        out += bundle.w(m - i).in_ring(Ring::C4) * ExtPoly::v_power(k, static_cast<int>(i));
      }
      return out;
    }
  }
  return ExtPoly(k);
}

BundleClassData total_sw_line_sum(int generators, const std::vector<std::vector<int>>& lines,
                                  std::size_t trivial_rank) {
  ExtPoly total = ExtPoly::one(generators);
  for (const auto& subset : lines) {
    ExtPoly factor = ExtPoly::one(generators);
    for (int i : subset) factor += ExtPoly::t(generators, i);
    total = total * factor;
  }
  return BundleClassData::from_total(generators, lines.size() + trivial_rank, total);
}

std::vector<ExtPoly> virtual_sw(const BundleClassData& numerator,
                                const BundleClassData& denominator) {
  if (numerator.generators != denominator.generators) {
    throw Error(ErrorCode::ModeMismatch, "virtual class over different bases");
  }
  const int k = numerator.generators;
  // (1 + x)^{-1} = sum x^j in characteristic 2; x is nilpotent of order <= k+1.
  const ExtPoly x = denominator.total() + ExtPoly::one(k);
  ExtPoly inverse = ExtPoly::one(k);
  ExtPoly power = ExtPoly::one(k);
  for (int j = 1; j <= k; ++j) {
    power = power * x;
    if (power.is_zero()) break;
    inverse += power;
  }
  const ExtPoly product = numerator.total() * inverse;
  std::vector<ExtPoly> out;
  for (int d = 0; d <= k; ++d) out.push_back(product.homogeneous(d));
  return out;
}

LaurentQuotient laurent_divide(const ExtPoly& numerator, const ExtPoly& denominator) {
  check_compatible(numerator, denominator);
  if (numerator.ring() != Ring::Pm1) {
    throw Error(ErrorCode::ModeMismatch, "Laurent division is defined in the pm1 ring only");
  }
  if (denominator.is_zero()) {
    throw Error(ErrorCode::NonMonicDenominator, "division by zero");
  }
  const int top = denominator.max_u();
  if (!denominator.u_coefficient(top).is_one()) {
    throw Error(ErrorCode::NonMonicDenominator,
                "leading u-coefficient is " + denominator.u_coefficient(top).to_string());
  }
  const int k = numerator.generators();
  const int cap = max_u_degree();
  ExtPoly remainder = numerator;
  ExtPoly quotient(k, Ring::Pm1);
  while (!remainder.is_zero()) {
    const int lead = remainder.max_u();
    const int shift = lead - top;
    if (shift < -cap) {
      throw Error(ErrorCode::NonExactDivision,
                  "division does not terminate above u^-" + std::to_string(cap) +
                      "; remainder " + remainder.to_string());
    }
    const ExtPoly term = remainder.u_coefficient(lead).shift_u(shift);
    quotient += term;
    remainder += term * denominator;
  }
  LaurentQuotient out{quotient, false};
  out.has_negative_u = !quotient.is_zero() && quotient.min_u() < 0;
  return out;
}

}  // namespace fourfold::charpoly
