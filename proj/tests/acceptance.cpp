// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fail.

#include <boost/multiprecision/cpp_int.hpp>
#include <chrono>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>

#include "fourfold/cli.hpp"
#include "fourfold/errors.hpp"
#include "fourfold/obstruct.hpp"
#include "support.hpp"

using namespace fourfold;
using manifold::Block;
using manifold::ManifoldExpr;
using obstruct::Certificate;
using obstruct::Theorem;
using obstruct::Verdict;

namespace {

struct Criterion {
  bool ok = true;
  std::string detail;

  void fail(const std::string& why) {
    if (ok) detail = why;
    ok = false;
  }
};

ManifoldExpr parse(const std::string& s) { return cli::parse(s); }

std::string top_monomial(std::size_t k) {
  std::string out;
  for (std::size_t i = 1; i <= k; ++i) out += (i > 1 ? "*t" : "t") + std::to_string(i);
  return out;
}

std::vector<Certificate> replay_pool;

Criterion criterion_1() {
  Criterion c;
  const auto start = std::chrono::steady_clock::now();
  for (int m = 0; m <= 6; ++m) {
    for (int n = 1; n <= 6; ++n) {
      std::string text = std::to_string(m) + "*-CP2 # -E8 # -CP2fake # " + std::to_string(n) +
                         "*S2xS2 # S1xY(b1=1)";
      const auto cert = obstruct::certify(parse(text));
      replay_pool.push_back(cert);
      if (cert.verdict != Verdict::NonSmoothable || cert.theorem != Theorem::ThmA ||
          cert.c1_square != -m - 1 || cert.sigma != -m - 9) {
        c.fail(text + ": c1^2=" + std::to_string(cert.c1_square.value_or(0)) +
               " sigma=" + std::to_string(cert.sigma));
      }
    }
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (secs >= 1.0) c.fail("took " + std::to_string(secs) + " s");
  if (c.ok) c.detail = "42 cases in " + std::to_string(secs) + " s";
  return c;
}

Criterion criterion_2() {
  Criterion c;
  for (int m = 1; m <= 3; ++m) {
    for (int n = 2; n <= 6; ++n) {
      const std::string text =
          std::to_string(2 * m) + "*-E8 # " + std::to_string(n) + "*S2xS2 # S2xSigma(g=1)";
      const auto cert = obstruct::certify(parse(text));
      replay_pool.push_back(cert);
      if (cert.verdict != Verdict::NonSmoothable || cert.theorem != Theorem::ThmB ||
          cert.base_dim != static_cast<std::size_t>(n - 1) || cert.complex_r_minus_s != 2 * m ||
          cert.witness_monomial != top_monomial(static_cast<std::size_t>(n - 1))) {
        c.fail(text + ": " + obstruct::to_string(cert.verdict) + " witness " +
               cert.witness_monomial);
      }
    }
  }
  if (c.ok) c.detail = "15 cases";
  return c;
}

Criterion criterion_3() {
  Criterion c;
  for (int m = 1; m <= 2; ++m)
    for (int a = 0; a <= 2; ++a)
      for (int b = 0; b <= 2; ++b) {
        const std::string text = std::to_string(m) + "*Enriques # " + std::to_string(a) +
                                 "*S2xS2 # " + std::to_string(2 * b) + "*-E8 # S1xY(b1=1)";
        const auto cert = obstruct::certify(parse(text));
        replay_pool.push_back(cert);
        if (cert.verdict != Verdict::NonSmoothable || cert.c1_square != 0 ||
            cert.sigma != -8 * (m + 2 * b)) {
          c.fail(text + ": " + obstruct::to_string(cert.verdict) +
                 " sigma=" + std::to_string(cert.sigma));
        }
      }
  if (c.ok) c.detail = "18 cases";
  return c;
}

Criterion criterion_4() {
  Criterion c;
  for (int k = 0; k <= 4; ++k) {
    const std::string text = "Enriques # " + std::to_string(k) + "*-CP2 # S2xSigma(g=1)";
    const auto cert = obstruct::certify(parse(text));
    replay_pool.push_back(cert);
    if (cert.verdict != Verdict::NonSmoothable || cert.base_dim != 1 || !cert.c1_square ||
        *cert.c1_square - cert.sigma != 8) {
      c.fail(text + ": " + obstruct::to_string(cert.verdict));
    }
  }
  if (c.ok) c.detail = "5 cases";
  return c;
}

int cli_exit(const std::string& expr) {
  std::ostringstream out, err;
  return cli::run({"certify", expr}, out, err);
}

std::string cli_error(const std::string& expr) {
  std::ostringstream out, err;
  cli::run({"certify", expr}, out, err);
  return err.str();
}

Criterion criterion_5() {
  Criterion c;
  for (const std::string expr :
       {"CP2 # -CP2 # S1xY(b1=1)", "-E8 # -CP2fake # S2xS2 # S1xY(b1=1)"}) {
    const int code = cli_exit(expr);
    const std::string err = cli_error(expr);
    if (code != cli::kExitInconclusive || err.find("HypothesesNotMet") == std::string::npos) {
      const auto x = parse(expr);
      c.fail("'" + expr + "' exited " + std::to_string(code) + " (sigma=" +
             std::to_string(x.signature()) + ")");
    }
  }

  // Whenever sigma >= 0 and every enumerated class has c^2 <= sigma, no
  // certificate may claim nonsmoothability.
  support::Rng rng(5);
  int guarded = 0;
  for (int trial = 0; trial < 400; ++trial) {
    auto blocks = support::random_blocks(rng, 4, true);
    blocks.push_back(Block::s1xy(support::pick(rng, 0, 1)));
    const ManifoldExpr x(blocks);
    std::vector<cover::CharClass> classes;
    try {
      classes = cover::enumerate_characteristics(cover::build_paper_cover(x), 1, 1 << 16);
    } catch (const Error&) {
      continue;
    }
    bool bounded = x.signature() >= 0;
    for (const auto& k : classes) bounded = bounded && k.square <= x.signature();
    try {
      const auto cert = obstruct::certify(x);
      if (cert.verdict == Verdict::NonSmoothable) {
        const bool justified = cert.theorem == Theorem::ThmA
                                   ? cert.c1_square.value_or(0) > cert.sigma
                                   : cert.sigma < 0;
        if (bounded || !justified) c.fail("certificate on " + manifold::to_string(x));
      }
    } catch (const Error& e) {
      if (e.code() != ErrorCode::HypothesesNotMet && e.code() != ErrorCode::TooManyGenerators)
        c.fail(e.what());
    }
    if (bounded) ++guarded;
  }
  if (c.ok) c.detail = "controls exit 3; " + std::to_string(guarded) + " guarded inputs";
  return c;
}

using Rational = boost::multiprecision::cpp_rational;

struct RationalInvariants {
  std::size_t rank = 0;
  std::int64_t signature = 0;
  bool even = true;
};

/// Symmetric elimination over Q.
RationalInvariants rational_diagonalization(const lattice::Matrix& g) {
  const std::size_t n = g.size();
  std::vector<std::vector<Rational>> a(n, std::vector<Rational>(n));
  RationalInvariants out;
  for (std::size_t i = 0; i < n; ++i) {
    out.even = out.even && g[i][i] % 2 == 0;
    for (std::size_t j = 0; j < n; ++j) a[i][j] = g[i][j];
  }
  std::vector<bool> done(n, false);
  for (std::size_t step = 0; step < n; ++step) {
    std::size_t p = n;
    for (std::size_t i = 0; i < n && p == n; ++i)
      if (!done[i] && a[i][i] != 0) p = i;
    if (p == n) {
      std::size_t i0 = n, j0 = n;
      for (std::size_t i = 0; i < n && i0 == n; ++i)
        for (std::size_t j = 0; j < n; ++j)
          if (!done[i] && !done[j] && i != j && a[i][j] != 0) {
            i0 = i;
            j0 = j;
            break;
          }
      if (i0 == n) break;
      // e_i0 <- e_i0 + e_j0 makes the diagonal entry 2 a[i0][j0].
      for (std::size_t k = 0; k < n; ++k) a[i0][k] += a[j0][k];
      for (std::size_t k = 0; k < n; ++k) a[k][i0] += a[k][j0];
      p = i0;
    }
    done[p] = true;
    ++out.rank;
    out.signature += a[p][p] > 0 ? 1 : -1;
    for (std::size_t i = 0; i < n; ++i) {
      if (done[i]) continue;
      const Rational f = a[i][p] / a[p][p];
      for (std::size_t k = 0; k < n; ++k) a[i][k] -= f * a[p][k];
      for (std::size_t k = 0; k < n; ++k) a[k][i] -= f * a[k][p];
    }
  }
  return out;
}

Criterion criterion_6() {
  Criterion c;
  support::Rng rng(6);
  int forms = 0;
  while (forms < 200) {
    const auto base = support::random_form(rng, 12);
    const auto p = support::random_unimodular(rng, base.dimension(), 15);
    const lattice::Matrix g = support::congruent(base.gram(), p);
    const auto oracle = rational_diagonalization(g);
    if (static_cast<std::size_t>(std::llabs(oracle.signature)) == oracle.rank) continue;
    ++forms;
    const auto nf = lattice::classify_indefinite(lattice::IntersectionForm({lattice::RawMatrix{g}}));
    const auto inv = lattice::invariants(nf.to_form());
    if (inv.rank != oracle.rank || inv.signature != oracle.signature ||
        (inv.parity == lattice::Parity::Even) != oracle.even) {
      c.fail("form of rank " + std::to_string(g.size()) + " disagrees");
    }
  }
  for (int trial = 0; trial < 200; ++trial) {
    const int k = support::pick(rng, 0, 5);
    const auto q = support::random_poly(rng, k, support::pick(rng, 0, 8), 0, 4);
    const int d = support::pick(rng, 0, 4);
    std::vector<charpoly::Monomial> low;
    const auto noise = support::random_poly(rng, k, support::pick(rng, 0, 6), 0, 4);
    for (const auto& m : noise.terms())
      if (m.u < d) low.push_back(m);
    const auto den = charpoly::ExtPoly::from_terms(k, charpoly::Ring::Pm1, low) +
                     charpoly::ExtPoly::u_power(k, d);
    const auto r = charpoly::laurent_divide(q * den, den);
    if (!(r.quotient == q) || r.has_negative_u) c.fail("division round trip " + q.to_string());
  }
  if (c.ok) c.detail = "200 forms, 200 divisions";
  return c;
}

Criterion criterion_7() {
  Criterion c;
  support::Rng rng(7);
  for (int trial = 0; trial < 500; ++trial) {
    const auto blocks = support::random_blocks(rng, 10);
    const ManifoldExpr x(blocks);
    std::int64_t sigma = 0;
    int ks = 0;
    for (const auto& b : blocks) {
      sigma += b.signature();
      ks ^= b.ks();
    }
    if (x.signature() != sigma || x.ks() != ks ||
        lattice::invariants(x.form()).signature != sigma) {
      c.fail("additivity on " + manifold::to_string(x));
    }
    try {
      const auto n = manifold::normalize_homeo_type(x);
      if (!(manifold::normalize_homeo_type(n) == n)) c.fail("normalize not idempotent");
    } catch (const Error& e) {
      if (e.code() != ErrorCode::DefinitePartUnsupported) c.fail(e.what());
    }
  }

  auto mod8 = [](std::int64_t v) { return ((v % 8) + 8) % 8; };
  for (int plus = 0; plus <= 4; ++plus) {
    for (int minus = 0; plus + minus <= 4; ++minus) {
      if (plus + minus == 0) continue;
      const ManifoldExpr x({std::vector<Block>(static_cast<std::size_t>(plus), Block::cp2())});
      const auto y = manifold::connected_sum(
          manifold::connected_sum(x, ManifoldExpr::of(Block::neg_cp2(), static_cast<std::size_t>(minus))),
          ManifoldExpr::of(Block::s1xy(0)));
      const auto ls = cover::build_paper_cover(y);
      const auto& g = ls.free_form().gram();
      std::size_t brute = 0;
      support::for_each_box_vector(g.size(), 3, [&](const lattice::Vector& v) {
        if (!support::gram_characteristic(g, v)) return;
        ++brute;
        if (mod8(support::gram_square(g, v)) != mod8(plus - minus)) c.fail("van der Blij");
      });
      const auto classes = cover::enumerate_characteristics(ls, 3);
      if (classes.size() != brute) c.fail("characteristic count");
      for (const auto& k : classes)
        if (mod8(k.square) != mod8(plus - minus)) c.fail("van der Blij (enumerated)");
    }
  }

  for (const auto& cert : replay_pool)
    if (!obstruct::replay(cert)) c.fail("replay of " + manifold::to_string(cert.inputs.expression));
  if (c.ok) c.detail = std::to_string(replay_pool.size()) + " certificates replayed";
  return c;
}

Criterion criterion_8() {
  Criterion c;
  support::Rng rng(8);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t k = static_cast<std::size_t>(support::pick(rng, 1, 5));
    const auto x = parse("-E8 # -CP2fake # " + std::to_string(k) + "*S2xS2 # S1xY(b1=1)");
    const auto f = obstruct::scenario_family(x, obstruct::Scenario::NonSpin);
    const std::size_t m = static_cast<std::size_t>(support::pick(rng, 0, 6));
    const std::size_t n = static_cast<std::size_t>(support::pick(rng, 0, 6));
    const int gens = static_cast<int>(f.base_dim);
    const auto report =
        obstruct::corollary_constraints(f, charpoly::BundleClassData::trivial(gens, m),
                                        charpoly::BundleClassData::trivial(gens, n));
    if (report.euler_h_plus != top_monomial(k)) c.fail("e(H+) = " + report.euler_h_plus);
    bool degree0_violated = false;
    for (const auto& row : report.rows)
      if (row.degree == 0 && !row.satisfied) degree0_violated = true;
    const bool expect = static_cast<std::int64_t>(n) - static_cast<std::int64_t>(m) < 0;
    if (degree0_violated != expect || report.incompatible != expect) {
      c.fail("n=" + std::to_string(n) + " m=" + std::to_string(m));
    }
  }
  if (c.ok) c.detail = "50 rank pairs";
  return c;
}

}  // namespace

int main() {
  int failed = 0;
  auto report = [&](int id, const char* what, Criterion (*fn)()) {
    Criterion c;
    const auto start = std::chrono::steady_clock::now();
    try {
      c = fn();
    } catch (const std::exception& e) {
      c.fail(std::string("exception: ") + e.what());
    }
    if (!c.ok) ++failed;
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::cout << (c.ok ? "PASS" : "FAIL") << " " << id << " " << what << ": " << c.detail
              << " [" << std::fixed << std::setprecision(2) << secs << " s]" << std::endl;
  };
  report(1, "non-spin arithmetic", criterion_1);
  report(2, "spin arithmetic", criterion_2);
  report(3, "Enriques spin case", criterion_3);
  report(4, "Enriques non-spin case", criterion_4);
  report(5, "negative controls", criterion_5);
  report(6, "oracle equivalence", criterion_6);
  report(7, "property suites", criterion_7);
  report(8, "constraint reporter", criterion_8);
  return failed == 0 ? 0 : 1;
}
