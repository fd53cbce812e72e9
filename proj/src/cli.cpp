#include "fourfold/cli.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "fourfold/cover.hpp"
#include "fourfold/errors.hpp"
#include "fourfold/lattice.hpp"
#include "json.hpp"

namespace fourfold::cli {

using manifold::Block;
using manifold::ManifoldExpr;

namespace {

constexpr std::int64_t kMaxMultiplicity = 1 << 16;

class ExprParser {
 public:
  explicit ExprParser(std::string_view text) : text_(text) {}

  ManifoldExpr parse() {
    skip_space();
    if (at_end()) fail(ErrorCode::ParseError, "empty expression");
    std::vector<Block> blocks;
    term(blocks);
    skip_space();
    while (!at_end()) {
      expect('#');
      term(blocks);
      skip_space();
    }
    return ManifoldExpr(std::move(blocks));
  }

 private:
  [[noreturn]] void fail(ErrorCode code, const std::string& message) const {
    throw ParseFailure(code, message, pos_);
  }

  bool at_end() const { return pos_ >= text_.size(); }
  char peek() const { return at_end() ? '\0' : text_[pos_]; }

  void skip_space() {
    while (!at_end() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  void expect(char c) {
    skip_space();
    if (peek() != c) {
      fail(ErrorCode::ParseError,
           std::string("expected '") + c + "'" + (at_end() ? " but input ended" : ""));
    }
    ++pos_;
  }

  std::int64_t integer() {
    skip_space();
    const std::size_t start = pos_;
    if (peek() == '-') {
      fail(ErrorCode::NegativeMultiplicity, "negative integer");
    }
    std::int64_t value = 0;
    while (std::isdigit(static_cast<unsigned char>(peek()))) {
      value = value * 10 + (peek() - '0');
      if (value > kMaxMultiplicity) {
        pos_ = start;
        fail(ErrorCode::ParseError, "integer too large");
      }
      ++pos_;
    }
    if (pos_ == start) fail(ErrorCode::ParseError, "expected an integer");
    return value;
  }

  bool accept_word(std::string_view word) {
    if (text_.substr(pos_, word.size()) != word) return false;
    pos_ += word.size();
    return true;
  }

  void term(std::vector<Block>& out) {
    skip_space();
    std::int64_t mult = 1;
    if (peek() == '-' && pos_ + 1 < text_.size() &&
        std::isdigit(static_cast<unsigned char>(text_[pos_ + 1]))) {
      fail(ErrorCode::NegativeMultiplicity, "multiplicity must be non-negative");
    }
    if (std::isdigit(static_cast<unsigned char>(peek()))) {
      mult = integer();
      expect('*');
      skip_space();
    }
    const Block b = block();
    for (std::int64_t i = 0; i < mult; ++i) out.push_back(b);
  }

  std::int64_t parameter(std::string_view key) {
    expect('(');
    skip_space();
    if (!accept_word(key)) fail(ErrorCode::ParseError, "expected '" + std::string(key) + "'");
    expect('=');
    const std::size_t at = pos_;
    const std::int64_t v = integer();
    expect(')');
    last_param_at_ = at;
    return v;
  }

  Block block() {
    // Longest names first so that prefixes do not shadow them.
    static constexpr std::array<std::string_view, 13> kNames = {
        "-CP2fake", "S2xSigma", "CP2fake", "Enriques", "S2xS2", "-CP2", "S1xY",
        "-K3",      "-E8",      "CP2",     "K3",       "E8",    "S4"};
    for (auto name : kNames) {
      if (!accept_word(name)) continue;
      if (name == "-CP2fake") return Block::neg_cp2_fake();
      if (name == "CP2fake") return Block::cp2_fake();
      if (name == "Enriques") return Block::enriques();
      if (name == "S2xS2") return Block::s2xs2();
      if (name == "-CP2") return Block::neg_cp2();
      if (name == "-K3") return Block::neg_k3();
      if (name == "-E8") return Block::e8(-1);
      if (name == "CP2") return Block::cp2();
      if (name == "K3") return Block::k3();
      if (name == "E8") return Block::e8(1);
      if (name == "S4") return Block::s4();
      if (name == "S1xY") return Block::s1xy(parameter("b1"));
      const std::int64_t g = parameter("g");
      if (g == 0) {
        pos_ = last_param_at_;
        skip_space();
        fail(ErrorCode::GenusZero, "S2xSigma needs positive genus");
      }
      return Block::s2xsigma(g);
    }
    if (accept_word("W")) return Block::w();
    fail(ErrorCode::ParseError, at_end() ? "expected a block name but input ended"
                                         : "unknown block name");
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t last_param_at_ = 0;
};

std::string bool_text(bool b) { return b ? "true" : "false"; }

}  // namespace

ManifoldExpr parse(std::string_view text) { return ExprParser(text).parse(); }

std::string render(const ManifoldExpr& x) { return manifold::to_string(x); }

std::string emit_json(const obstruct::Certificate& c) {
  nlohmann::ordered_json doc;
  doc["verdict"] = obstruct::to_string(c.verdict);
  doc["theorem"] = obstruct::to_string(c.theorem);
  doc["base_dim"] = c.base_dim;
  doc["b_plus_ell"] = c.b_plus_ell;
  doc["witness_monomial"] = c.witness_monomial;
  doc["c1_square"] = c.c1_square ? nlohmann::ordered_json(*c.c1_square) : nullptr;
  doc["sigma"] = c.sigma;
  nlohmann::ordered_json index = nlohmann::ordered_json::object();
  if (c.real_m_minus_n) index["real_m_minus_n"] = *c.real_m_minus_n;
  if (c.complex_r_minus_s) index["complex_r_minus_s"] = *c.complex_r_minus_s;
  doc["index"] = index;
  nlohmann::ordered_json inputs;
  inputs["expression"] = render(c.inputs.expression);
  inputs["scenario"] = obstruct::to_string(c.inputs.options.scenario);
  inputs["scenario_used"] = obstruct::to_string(c.inputs.scenario_used);
  inputs["reverse"] = c.inputs.options.reverse;
  inputs["bound"] = c.inputs.options.bound;
  doc["inputs"] = inputs;
  nlohmann::ordered_json steps = nlohmann::ordered_json::array();
  for (const auto& s : c.transcript) {
    nlohmann::ordered_json step;
    step["fact"] = s.fact;
    step["value"] = s.value;
    steps.push_back(step);
  }
  doc["transcript"] = steps;
  return doc.dump(2);
}

std::pair<charpoly::BundleClassData, charpoly::BundleClassData> parse_constraints(
    std::string_view text, int generators) {
  struct Section {
    bool seen = false;
    std::size_t rank = 0;
    std::vector<std::pair<std::size_t, charpoly::ExtPoly>> classes;
  };
  Section v1, w1;
  Section* current = nullptr;
  std::size_t offset = 0;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    const std::size_t line_start = offset;
    offset += line.size() + 1;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    const auto last = line.find_last_not_of(" \t\r");
    const std::string body = line.substr(first, last - first + 1);
    const std::size_t at = line_start + first;
    if (body == "V1" || body == "W1") {
      current = body == "V1" ? &v1 : &w1;
      if (current->seen) throw ParseFailure(ErrorCode::ParseError, "duplicate section " + body, at);
      current->seen = true;
      continue;
    }
    if (current == nullptr) {
      throw ParseFailure(ErrorCode::ParseError, "expected section header V1 or W1", at);
    }
    if (body.rfind("rank", 0) == 0) {
      std::istringstream r(body.substr(4));
      long long n = -1;
      std::string extra;
      if (!(r >> n) || n < 0 || (r >> extra)) {
        throw ParseFailure(ErrorCode::ParseError, "bad rank line", at);
      }
      current->rank = static_cast<std::size_t>(n);
      continue;
    }
    const auto eq = body.find('=');
    if (body.empty() || body[0] != 'w' || eq == std::string::npos) {
      throw ParseFailure(ErrorCode::ParseError, "expected 'rank N' or 'w_i = <class>'", at);
    }
    std::string idx = body.substr(1, eq - 1);
    idx.erase(std::remove_if(idx.begin(), idx.end(),
                             [](char ch) { return ch == '_' || std::isspace(static_cast<unsigned char>(ch)); }),
              idx.end());
    if (idx.empty() || !std::all_of(idx.begin(), idx.end(),
                                    [](char ch) { return std::isdigit(static_cast<unsigned char>(ch)); })) {
      throw ParseFailure(ErrorCode::ParseError, "bad class index", at);
    }
    const std::size_t i = std::stoul(idx);
    try {
      current->classes.emplace_back(
          i, charpoly::ExtPoly::parse(body.substr(eq + 1), generators));
    } catch (const ParseFailure& e) {
      std::string message = e.what();
      message.erase(message.rfind(" at byte "));
      throw ParseFailure(ErrorCode::ParseError, message, at + eq + 1 + e.offset());
    }
  }
  auto build = [&](const Section& s, const char* name) {
    if (!s.seen) throw ParseFailure(ErrorCode::ParseError, std::string("missing section ") + name, offset);
    auto data = charpoly::BundleClassData::trivial(generators, s.rank);
    for (const auto& [i, poly] : s.classes) {
      if (i == 0 || i > s.rank) {
        throw Error(ErrorCode::RankMismatch, std::string(name) + ": w_" + std::to_string(i) +
                                                 " outside rank " + std::to_string(s.rank));
      }
      data.classes[i - 1] = poly;
    }
    data.validate();
    return data;
  };
  return {build(v1, "V1"), build(w1, "W1")};
}

namespace {

std::string read_expression(const std::string& arg) {
  if (arg != "-") return arg;
  std::ostringstream ss;
  ss << std::cin.rdbuf();
  return ss.str();
}

obstruct::Certificate unmet_certificate(const ManifoldExpr& x,
                                        const obstruct::CertifyOptions& options,
                                        const std::string& hypothesis) {
  obstruct::Certificate c;
  c.inputs = {x, options, options.scenario};
  c.transcript.push_back({"scenario", obstruct::to_string(options.scenario)});
  c.transcript.push_back({"hypothesis failed", hypothesis});
  c.sigma = x.signature();
  return c;
}

void print_certificate(const obstruct::Certificate& c, std::ostream& out) {
  out << "verdict: " << obstruct::to_string(c.verdict) << "\n";
  out << "theorem: " << obstruct::to_string(c.theorem) << "\n";
  out << "base: T^" << c.base_dim << "\n";
  for (const auto& s : c.transcript) out << "  " << s.fact << ": " << s.value << "\n";
}

int cmd_invariants(const ManifoldExpr& x, std::ostream& out) {
  out << "sigma: " << x.signature() << "\n"
      << "b2: " << x.b2() << "\n"
      << "b_plus: " << x.b_plus() << "\n"
      << "b_minus: " << x.b_minus() << "\n"
      << "b1: " << x.b1() << "\n"
      << "spin: " << bool_text(x.spin()) << "\n"
      << "ks: " << x.ks() << "\n";
  return kExitOk;
}

int cmd_classify(const ManifoldExpr& x, bool reverse, std::ostream& out) {
  const ManifoldExpr normal = manifold::normalize_homeo_type(x, {reverse});
  out << "normal form: " << render(normal) << "\n";
  const auto sc = normal.simply_connected_part();
  if (!sc.empty()) {
    const auto nf = lattice::classify_indefinite(sc.form());
    out << "form of simply-connected part: ";
    if (nf.parity == lattice::Parity::Even) {
      out << nf.e8_count << "*" << (nf.e8_sign < 0 ? "-E8" : "E8") << " + " << nf.hyperbolic_count
          << "*H\n";
    } else {
      out << nf.plus_count << "*(+1) + " << nf.minus_count << "*(-1)\n";
    }
  }
  return kExitOk;
}

int cmd_cover(const ManifoldExpr& x, std::ostream& out) {
  const auto ls = cover::build_paper_cover(x);
  out << "b_plus_ell: " << ls.b_plus_ell() << "\n"
      << "free_rank_ell: " << ls.free_rank_ell() << "\n"
      << "torsion_bits: " << ls.torsion_bits() << "\n"
      << "w1_sq_zero: " << bool_text(ls.w1_sq_zero()) << "\n"
      << "b1_ell: " << ls.b1_ell() << " (not modeled)\n"
      << "w2+w1^2: " << cover::serialize(ls, cover::w2_plus_w1sq(ls)) << "\n";
  return kExitOk;
}

int cmd_spinc(const ManifoldExpr& x, int bound, std::ostream& out) {
  const auto ls = cover::build_paper_cover(x);
  const auto classes = cover::enumerate_characteristics(ls, bound);
  out << classes.size() << " classes\n";
  for (const auto& c : classes) out << c.square << "\t" << cover::serialize(ls, c) << "\n";
  return kExitOk;
}

int cmd_certify(const ManifoldExpr& x, const obstruct::CertifyOptions& options, bool json,
                std::ostream& out) {
  obstruct::Certificate c;
  try {
    c = obstruct::certify(x, options);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::HypothesesNotMet) throw;
    if (!json) throw;
    c = unmet_certificate(x, options, e.what());
  }
  if (json) {
    out << emit_json(c) << "\n";
  } else {
    print_certificate(c, out);
  }
  return c.verdict == obstruct::Verdict::NonSmoothable ? kExitOk : kExitInconclusive;
}

int cmd_constraints(const ManifoldExpr& x, const std::string& path, obstruct::Scenario scenario,
                    bool reverse, std::ostream& out) {
  std::ifstream file(path);
  if (!file) throw Error(ErrorCode::ParseError, "cannot read data file '" + path + "'");
  std::ostringstream ss;
  ss << file.rdbuf();
  const auto family = obstruct::scenario_family(x, scenario, reverse);
  const auto [v1, w1] = parse_constraints(ss.str(), static_cast<int>(family.base_dim));
  const auto report = obstruct::corollary_constraints(family, v1, w1);
  out << "base: T^" << family.base_dim << "\n"
      << "n-m: " << report.n_minus_m << "\n"
      << "e(H+): " << report.euler_h_plus << "\n";
  for (const auto& row : report.rows) {
    out << "  w_" << row.degree << " = " << row.virtual_class << "; times e(H+) = " << row.product
        << (row.satisfied ? "  ok" : "  VIOLATED") << "\n";
  }
  out << "result: " << (report.incompatible ? "Incompatible" : "Compatible") << "\n";
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Homeomorphism invariants and family nonsmoothability certificates", "fourfold"};
  app.require_subcommand(1);

  std::string expr;
  bool reverse = false;
  bool json = false;
  int bound = 1;
  std::string scenario = "auto";
  std::string data;

  auto* inv = app.add_subcommand("invariants", "signature, Betti numbers, spin, ks");
  inv->add_option("expr", expr, "connected-sum expression, '-' for stdin")->required();
  auto* cls = app.add_subcommand("classify", "homeomorphism normal form");
  cls->add_option("expr", expr)->required();
  cls->add_flag("--reverse", reverse, "reverse orientation first");
  auto* cov = app.add_subcommand("cover", "double cover data");
  cov->add_option("expr", expr)->required();
  auto* spc = app.add_subcommand("spinc", "characteristic classes of the cover");
  spc->add_option("expr", expr)->required();
  spc->add_option("--bound", bound, "coordinate bound")->check(CLI::Range(1, 16));
  auto* cert = app.add_subcommand("certify", "run the nonsmoothability pipeline");
  cert->add_option("expr", expr)->required();
  cert->add_option("--scenario", scenario)
      ->check(CLI::IsMember({"auto", "spin", "nonspin", "enriques"}));
  cert->add_flag("--json", json);
  cert->add_flag("--reverse", reverse);
  cert->add_option("--bound", bound)->check(CLI::Range(1, 16));
  auto* con = app.add_subcommand("constraints", "index-bundle constraints from a data file");
  con->add_option("expr", expr)->required();
  con->add_option("--data", data, "V1/W1 data file")->required();
  con->add_option("--scenario", scenario)
      ->check(CLI::IsMember({"auto", "spin", "nonspin", "enriques"}));
  con->add_flag("--reverse", reverse);
  app.add_subcommand("blocks", "block table as JSON");

  // Expressions such as "-E8 # ..." would otherwise read as short flags; the
  // expression grammar ignores the leading space.
  std::vector<std::string> reversed;
  for (auto it = args.rbegin(); it != args.rend(); ++it) {
    const bool dashed = it->size() > 1 && (*it)[0] == '-' && (*it)[1] != '-' && *it != "-h";
    reversed.push_back(dashed ? " " + *it : *it);
  }
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInputError;
  }

  try {
    if (const char* cap = std::getenv("FOURFOLD_MAX_UDEG"); cap != nullptr && *cap != '\0') {
      char* end = nullptr;
      const long v = std::strtol(cap, &end, 10);
      if (*end != '\0' || v < 1 || v > (1 << 20)) {
        throw Error(ErrorCode::ParseError, std::string("bad FOURFOLD_MAX_UDEG '") + cap + "'");
      }
      charpoly::set_max_u_degree(static_cast<int>(v));
    }
    const auto* sub = app.get_subcommands().front();
    const std::string name = sub->get_name();
    if (name == "blocks") {
      out << manifold::block_table_json() << "\n";
      return kExitOk;
    }
    const ManifoldExpr x = parse(read_expression(expr));
    if (name == "invariants") return cmd_invariants(x, out);
    if (name == "classify") return cmd_classify(x, reverse, out);
    if (name == "cover") return cmd_cover(x, out);
    if (name == "spinc") return cmd_spinc(x, bound, out);
    if (name == "certify") {
      return cmd_certify(x, {obstruct::scenario_from_string(scenario), reverse, bound}, json, out);
    }
    return cmd_constraints(x, data, obstruct::scenario_from_string(scenario), reverse, out);
  } catch (const Error& e) {
    err << "error: " << to_string(e.code()) << ": " << e.what() << "\n";
    return e.code() == ErrorCode::HypothesesNotMet ? kExitInconclusive : kExitInputError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitInputError;
  }
}

}  // namespace fourfold::cli
