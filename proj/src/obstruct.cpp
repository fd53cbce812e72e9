#include "fourfold/obstruct.hpp"

#include <algorithm>
#include <set>

#include "fourfold/errors.hpp"

namespace fourfold::obstruct {

using charpoly::BundleClassData;
using charpoly::EulerMode;
using charpoly::ExtPoly;
using cover::CharClass;
using cover::LocalSystem;
using manifold::Block;
using manifold::BlockKind;
using manifold::ManifoldExpr;
using manifold::ReflectionSlot;

std::string to_string(Verdict v) {
  return v == Verdict::NonSmoothable ? "NonSmoothable" : "Inconclusive";
}

std::string to_string(Theorem t) {
  switch (t) {
    case Theorem::ThmA: return "ThmA";
    case Theorem::ThmB: return "ThmB";
    case Theorem::None: return "none";
  }
  return "none";
}

std::string to_string(Scenario s) {
  switch (s) {
    case Scenario::Auto: return "auto";
    case Scenario::Spin: return "spin";
    case Scenario::NonSpin: return "nonspin";
    case Scenario::Enriques: return "enriques";
  }
  return "auto";
}

Scenario scenario_from_string(const std::string& s) {
  if (s == "auto") return Scenario::Auto;
  if (s == "spin") return Scenario::Spin;
  if (s == "nonspin") return Scenario::NonSpin;
  if (s == "enriques") return Scenario::Enriques;
  throw Error(ErrorCode::ParseError, "unknown scenario '" + s + "'");
}

FamilyDescriptor build_family(const ManifoldExpr& x, const LocalSystem& ls,
                              const std::vector<ReflectionSlot>& slots) {
  const ManifoldExpr base = manifold::expand_enriques(x);
  if (!(base == ls.base())) {
    throw Error(ErrorCode::DimensionMismatch, "cover was built for a different expression");
  }
  const auto available = manifold::reflection_slots(base);
  std::set<std::size_t> used;
  FamilyDescriptor f;
  for (const auto& s : slots) {
    if (std::find(available.begin(), available.end(), s) == available.end()) {
      throw Error(ErrorCode::SlotUnavailable,
                  "no reflection slot on block " + std::to_string(s.block_index));
    }
    if (!used.insert(s.block_index).second) {
      throw Error(ErrorCode::SlotUnavailable,
                  "slot on block " + std::to_string(s.block_index) + " used twice");
    }
    f.actions.push_back({s.block_index, ls.free_offset(s.block_index), s.action});
  }
  const auto k = static_cast<std::int64_t>(slots.size());
  if (k > ls.b_plus_ell()) {
    throw Error(ErrorCode::TooManyGenerators,
                std::to_string(k) + " generators exceed b+^l = " + std::to_string(ls.b_plus_ell()));
  }
  if (slots.size() > kMaxBaseDim) {
    throw Error(ErrorCode::TooManyGenerators,
                std::to_string(k) + " generators exceed the supported torus dimension " +
                    std::to_string(kMaxBaseDim));
  }
  f.base_dim = slots.size();
  f.manifold = base;
  f.cover = ls;
  f.generators = slots;
  std::vector<std::vector<int>> lines;
  for (int i = 1; i <= static_cast<int>(k); ++i) lines.push_back({i});
  f.h_plus_bundle = charpoly::total_sw_line_sum(static_cast<int>(k), lines,
                                                static_cast<std::size_t>(ls.b_plus_ell() - k));
  return f;
}

bool lift_valid(const FamilyDescriptor& f, const CharClass& c) {
  for (const auto& g : f.actions) {
    const std::size_t w = g.action.size();
    if (g.free_offset + w > c.free_part.size()) return false;
    bool same = true, negated = true;
    for (std::size_t i = 0; i < w; ++i) {
      std::int64_t image = 0;
      for (std::size_t j = 0; j < w; ++j) image += g.action[i][j] * c.free_part[g.free_offset + j];
      const std::int64_t x = c.free_part[g.free_offset + i];
      same = same && image == x;
      negated = negated && image == -x;
    }
    if (!same && !negated) return false;
  }
  return true;
}

namespace {

std::string slot_list(const FamilyDescriptor& f) {
  std::string out;
  for (const auto& s : f.generators) {
    if (!out.empty()) out += ",";
    out += f.manifold.blocks()[s.block_index].name() + "@" + std::to_string(s.block_index);
  }
  return out.empty() ? "none" : out;
}

std::string leading_monomial(const ExtPoly& p) {
  return p.is_zero() ? "" : charpoly::render_monomial(p.terms().front());
}

// Total class of the standard family bundle, in factored form.
std::string line_product(std::size_t k) {
  if (k == 0) return "1";
  std::string out;
  for (std::size_t i = 1; i <= k; ++i) {
    if (i > 1) out += "*";
    out += "(1 + t" + std::to_string(i) + ")";
  }
  return out;
}

void common_steps(const FamilyDescriptor& f, std::vector<TranscriptStep>& t) {
  t.push_back({"family", manifold::to_string(f.manifold)});
  t.push_back({"base_dim", std::to_string(f.base_dim)});
  t.push_back({"slots", slot_list(f)});
  t.push_back({"b_plus_ell", std::to_string(f.cover.b_plus_ell())});
  t.push_back({"rank H+", std::to_string(f.h_plus_bundle.rank)});
  t.push_back({"w(H+)", line_product(f.base_dim)});
}

}  // namespace

Certificate check_theorem_A(const FamilyDescriptor& f, const CharClass& c) {
  if (!lift_valid(f, c)) {
    throw Error(ErrorCode::PreconditionViolated,
                "reflections do not preserve c up to sign: " + cover::serialize(f.cover, c));
  }
  const CharClass checked = cover::make_class(f.cover, c.free_part, c.torsion_part);
  if (!checked.mod2_ok) {
    throw Error(ErrorCode::PreconditionViolated,
                "class is not characteristic: " + cover::serialize(f.cover, c));
  }
  const std::int64_t b = f.cover.b_plus_ell();
  const std::int64_t sigma = f.manifold.signature();
  const std::int64_t sq = checked.square;
  const ExtPoly wb = f.h_plus_bundle.w(static_cast<std::size_t>(b));

  Certificate cert;
  cert.theorem = Theorem::ThmA;
  cert.base_dim = f.base_dim;
  cert.b_plus_ell = b;
  cert.witness_monomial = leading_monomial(wb);
  cert.c1_square = sq;
  cert.sigma = sigma;

  auto& t = cert.transcript;
  common_steps(f, t);
  t.push_back({"w_b(H+)", wb.to_string()});
  t.push_back({"c1", cover::serialize(f.cover, checked)});
  t.push_back({"spinc_minus_exists", "true"});
  t.push_back({"lift_valid", "true"});
  t.push_back({"c1^2", std::to_string(sq)});
  t.push_back({"sigma", std::to_string(sigma)});

  if ((sq - sigma) % 4 == 0) {
    const std::int64_t index = (sq - sigma) / 4;
    cert.real_m_minus_n = index;
    t.push_back({"m-n = (c1^2 - sigma)/4", std::to_string(index)});
    // e(H+) u^n must be divisible by u^m; a negative u-power in the quotient
    // is the failure of that divisibility. e(H+) = sum w_{b-i} u^i, and only
    // its lowest nonzero u-term can produce a negative power.
    const int k = static_cast<int>(f.base_dim);
    std::int64_t low = 0;
    while (low < b && f.h_plus_bundle.w(static_cast<std::size_t>(b - low)).is_zero()) ++low;
    const auto lowest = f.h_plus_bundle.w(static_cast<std::size_t>(b - low)) *
                        ExtPoly::u_power(k, static_cast<int>(low));
    const auto num =
        lowest * ExtPoly::u_power(k, static_cast<int>(std::max<std::int64_t>(0, -index)));
    const auto den = ExtPoly::u_power(k, static_cast<int>(std::max<std::int64_t>(0, index)));
    const auto q = charpoly::laurent_divide(num, den);
    t.push_back({"lowest u-term of e(H+) u^n / u^m", q.quotient.to_string()});
    t.push_back({"negative u-power", q.has_negative_u ? "true" : "false"});
  }

  const bool fires = !wb.is_zero() && sq > sigma;
  t.push_back({"c1^2 <= sigma", sq <= sigma ? "holds" : "violated"});
  cert.verdict = fires ? Verdict::NonSmoothable : Verdict::Inconclusive;
  if (!fires) {
    t.push_back({"inconclusive", wb.is_zero() ? "w_b(H+) = 0" : "c1^2 <= sigma"});
  }
  return cert;
}

Certificate check_theorem_B(const FamilyDescriptor& f) {
  const LocalSystem& ls = f.cover;
  const CharClass zero = cover::make_class(
      ls, lattice::Vector(ls.free_form().dimension(), 0),
      std::vector<std::uint8_t>(ls.torsion_bits(), 0));
  if (!zero.mod2_ok) {
    throw Error(ErrorCode::ZeroClassUnavailable,
                "w2 + w1^2 = " + cover::serialize(ls, cover::w2_plus_w1sq(ls)) + " is nonzero");
  }
  const std::int64_t b = ls.b_plus_ell();
  const std::int64_t sigma = f.manifold.signature();
  const ExtPoly wb = f.h_plus_bundle.w(static_cast<std::size_t>(b));
  const ExtPoly wb1 = b >= 1 ? f.h_plus_bundle.w(static_cast<std::size_t>(b - 1))
                             : ExtPoly(static_cast<int>(f.base_dim));

  Certificate cert;
  cert.theorem = Theorem::ThmB;
  cert.base_dim = f.base_dim;
  cert.b_plus_ell = b;
  cert.witness_monomial = leading_monomial(wb.is_zero() ? wb1 : wb);
  cert.c1_square = 0;
  cert.sigma = sigma;

  auto& t = cert.transcript;
  common_steps(f, t);
  t.push_back({"w_b(H+)", wb.to_string()});
  t.push_back({"w_{b-1}(H+)", wb1.to_string()});
  t.push_back({"e_C4(H+)",
               charpoly::equivariant_euler(f.h_plus_bundle, EulerMode::C4Sign).to_string()});
  t.push_back({"c1", cover::serialize(ls, zero)});
  t.push_back({"c1^2", "0"});
  t.push_back({"sigma", std::to_string(sigma)});
  if (sigma % 8 == 0) {
    cert.complex_r_minus_s = -sigma / 8;
    t.push_back({"r-s = -sigma/8", std::to_string(-sigma / 8)});
  }

  const bool fires = (!wb.is_zero() || !wb1.is_zero()) && sigma < 0;
  t.push_back({"sigma >= 0", sigma >= 0 ? "holds" : "violated"});
  cert.verdict = fires ? Verdict::NonSmoothable : Verdict::Inconclusive;
  if (!fires) {
    t.push_back({"inconclusive", sigma >= 0 ? "sigma >= 0" : "w_b(H+) = w_{b-1}(H+) = 0"});
  }
  return cert;
}

ConstraintReport corollary_constraints(const FamilyDescriptor& f, const BundleClassData& v1,
                                       const BundleClassData& w1) {
  v1.validate();
  w1.validate();
  const int k = static_cast<int>(f.base_dim);
  if (v1.generators != k || w1.generators != k) {
    throw Error(ErrorCode::RankMismatch,
                "index data over T^" + std::to_string(v1.generators) + "/T^" +
                    std::to_string(w1.generators) + ", family over T^" + std::to_string(k));
  }
  ConstraintReport report;
  report.n_minus_m =
      static_cast<std::int64_t>(w1.rank) - static_cast<std::int64_t>(v1.rank);
  const ExtPoly e = f.h_plus_bundle.w(f.h_plus_bundle.rank);
  report.euler_h_plus = e.to_string();
  const auto virt = charpoly::virtual_sw(w1, v1);
  const std::int64_t first = std::max<std::int64_t>(0, report.n_minus_m + 1);
  for (std::int64_t i = first; i <= k; ++i) {
    const ExtPoly& wi = virt[static_cast<std::size_t>(i)];
    const ExtPoly prod = wi * e;
    report.rows.push_back(
        {static_cast<int>(i), wi.to_string(), prod.to_string(), prod.is_zero()});
    report.incompatible = report.incompatible || !prod.is_zero();
  }
  return report;
}

namespace {

[[noreturn]] void unmet(const std::string& hypothesis) {
  throw Error(ErrorCode::HypothesesNotMet, hypothesis);
}

bool has_n_summand(const ManifoldExpr& x) {
  return std::any_of(x.blocks().begin(), x.blocks().end(),
                     [](const Block& b) { return b.n_type(); });
}

struct Plan {
  FamilyDescriptor family;
  std::vector<TranscriptStep> steps;
  bool spin_route = false;
};

std::vector<ReflectionSlot> first_slots(const ManifoldExpr& x, std::int64_t k) {
  auto slots = manifold::reflection_slots(x);
  if (static_cast<std::int64_t>(slots.size()) > k) slots.resize(static_cast<std::size_t>(k));
  return slots;
}

// Non-spin and spin recipe: X = M # N with M simply connected, indefinite, |sigma(M)| > 8.
Plan plan_theorem_1_1(const ManifoldExpr& x, bool spin, bool reverse) {
  ManifoldExpr oriented = reverse ? manifold::mirror(x) : x;
  if (oriented.count(Block::enriques()) > 0) unmet("no Enriques summands");
  if (oriented.count(Block::w()) > 0) unmet("no W summands");
  if (oriented.ks() != 0) unmet("ks(X)=0");
  const ManifoldExpr m = oriented.simply_connected_part();
  if (!has_n_summand(oriented)) unmet("N nonempty");
  const auto inv = lattice::invariants(m.form());
  if (inv.definite != lattice::Definiteness::Indefinite) unmet("M indefinite");
  if (std::llabs(inv.signature) <= 8) unmet("|σ(M)|>8");
  if (m.spin() != spin) unmet(spin ? "M spin" : "M non-spin");

  Plan plan;
  plan.spin_route = spin;
  plan.steps.push_back({"orientation", reverse ? "reversed" : "as given"});
  if (inv.signature > 0) {
    oriented = manifold::mirror(oriented);
    plan.steps.push_back({"sigma(M) > 0", "mirrored"});
  }
  const ManifoldExpr normal = manifold::normalize_homeo_type(oriented);
  plan.steps.push_back({"normalized", manifold::to_string(normal)});
  const LocalSystem ls = cover::build_paper_cover(normal);
  const std::int64_t n = ls.b_plus_ell();
  plan.family = build_family(normal, ls, first_slots(normal, spin ? n - 1 : n));
  return plan;
}

// Enriques recipe: X = mS # M # N with S the Enriques surface, m >= 1.
Plan plan_theorem_1_3(const ManifoldExpr& x, bool reverse) {
  if (x.count(Block::enriques()) == 0) unmet("m>=1 Enriques summands");
  if (reverse) unmet("orientation as given (Enriques summands)");
  if (x.count(Block::w()) > 0) unmet("no W summands outside Enriques");
  if (x.ks() != 0) unmet("ks(X)=0");
  if (!has_n_summand(x)) unmet("N nonempty");
  std::vector<Block> m_blocks;
  for (const auto& b : x.blocks()) {
    if (b.simply_connected()) m_blocks.push_back(b);
  }
  const ManifoldExpr m(std::move(m_blocks));
  if (m.spin() && m.signature() > 0) unmet("σ(M)<=0 for spin M");

  Plan plan;
  plan.steps.push_back({"orientation", "as given"});
  const ManifoldExpr normal = manifold::normalize_homeo_type(x);
  plan.steps.push_back({"normalized", manifold::to_string(normal)});
  const LocalSystem ls = cover::build_paper_cover(normal);
  plan.family = build_family(normal, ls, first_slots(normal, ls.b_plus_ell()));
  return plan;
}

Plan make_plan(const ManifoldExpr& x, Scenario s, bool reverse) {
  switch (s) {
    case Scenario::Spin: return plan_theorem_1_1(x, true, reverse);
    case Scenario::NonSpin: return plan_theorem_1_1(x, false, reverse);
    case Scenario::Enriques: return plan_theorem_1_3(x, reverse);
    case Scenario::Auto: break;
  }
  throw Error(ErrorCode::PreconditionViolated, "scenario must be fixed");
}

Certificate run_plan(const Plan& plan, int bound) {
  const FamilyDescriptor& f = plan.family;
  Certificate cert;
  if (plan.spin_route) {
    cert = check_theorem_B(f);
  } else {
    const auto classes = cover::enumerate_characteristics(f.cover, bound);
    const auto it = std::find_if(classes.begin(), classes.end(),
                                 [&](const CharClass& c) { return lift_valid(f, c); });
    if (it == classes.end()) {
      cert.base_dim = f.base_dim;
      cert.b_plus_ell = f.cover.b_plus_ell();
      cert.sigma = f.manifold.signature();
      common_steps(f, cert.transcript);
      cert.transcript.push_back({"inconclusive", "no lift-valid characteristic class"});
    } else {
      cert = check_theorem_A(f, *it);
      cert.transcript.insert(cert.transcript.begin(),
                             {"characteristic classes", std::to_string(classes.size())});
    }
  }
  cert.transcript.insert(cert.transcript.begin(), plan.steps.begin(), plan.steps.end());
  return cert;
}

Certificate certify_fixed(const ManifoldExpr& x, Scenario s, const CertifyOptions& options) {
  Certificate cert = run_plan(make_plan(x, s, options.reverse), options.bound);
  cert.inputs = {x, options, s};
  cert.transcript.insert(cert.transcript.begin(), {"scenario", to_string(s)});
  return cert;
}

Scenario natural_scenario(const ManifoldExpr& x, bool reverse) {
  if (x.count(Block::enriques()) > 0) return Scenario::Enriques;
  const ManifoldExpr oriented = reverse ? manifold::mirror(x) : x;
  return oriented.simply_connected_part().spin() ? Scenario::Spin : Scenario::NonSpin;
}

}  // namespace

FamilyDescriptor scenario_family(const ManifoldExpr& x, Scenario scenario, bool reverse) {
  if (scenario == Scenario::Auto) scenario = natural_scenario(x, reverse);
  return make_plan(x, scenario, reverse).family;
}

Certificate certify(const ManifoldExpr& x, const CertifyOptions& options) {
  if (options.scenario != Scenario::Auto) return certify_fixed(x, options.scenario, options);

  const Scenario natural = natural_scenario(x, options.reverse);
  std::optional<Certificate> fallback;
  std::string natural_failure;
  for (Scenario s : {Scenario::Enriques, Scenario::NonSpin, Scenario::Spin}) {
    try {
      Certificate cert = certify_fixed(x, s, options);
      if (cert.verdict == Verdict::NonSmoothable) return cert;
      if (!fallback) fallback = std::move(cert);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::HypothesesNotMet) throw;
      if (s == natural) natural_failure = e.what();
    }
  }
  if (fallback) return *fallback;
  throw Error(ErrorCode::HypothesesNotMet, natural_failure);
}

bool replay(const Certificate& c) {
  return certify(c.inputs.expression, c.inputs.options) == c;
}

}  // namespace fourfold::obstruct
