#include <cstdio>
#include <cstdlib>
#include <sstream>
#include <sys/wait.h>

#include "doctest.h"
#include "fourfold/cli.hpp"
#include "fourfold/errors.hpp"
#include "json.hpp"
#include "support.hpp"

using namespace fourfold;
using manifold::Block;
using manifold::ManifoldExpr;

namespace {

struct Outcome {
  int code = 0;
  std::string out, err;
};

Outcome run(std::vector<std::string> args) {
  std::ostringstream out, err;
  Outcome o;
  o.code = cli::run(args, out, err);
  o.out = out.str();
  o.err = err.str();
  return o;
}

std::string data_file(const std::string& name) { return std::string(FOURFOLD_TEST_DATA) + "/" + name; }

/// Runs the installed binary through the shell; returns (exit status, stdout).
std::pair<int, std::string> shell(const std::string& cmdline, const std::string& input = "") {
  std::string out;
  std::string full = std::string(FOURFOLD_CLI) + " " + cmdline + " 2>/dev/null";
  if (!input.empty()) full = "printf '%s' '" + input + "' | " + full;
  FILE* p = popen(full.c_str(), "r");
  REQUIRE(p != nullptr);
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, p)) > 0) out.append(buf, n);
  const int status = pclose(p);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

}  // namespace

TEST_CASE("parse examples") {
  const auto a = cli::parse("2*-E8 # 3*S2xS2");
  CHECK(a.spin());
  CHECK(a.signature() == -16);
  CHECK(a.b_plus() == 3);

  const auto b = cli::parse("Enriques # S2xSigma(g=2)");
  CHECK(b.count(Block::enriques()) == 1);
  CHECK(manifold::expand_enriques(b).count(Block::w()) == 1);

  CHECK(cli::parse("  CP2#-CP2 #\t-CP2fake ") ==
        ManifoldExpr({Block::cp2(), Block::neg_cp2(), Block::neg_cp2_fake()}));
  CHECK(cli::parse("0*K3 # S4") == ManifoldExpr{});
  CHECK(cli::parse("S1xY(b1=2) # CP2fake # E8 # -K3 # W") ==
        ManifoldExpr({Block::s1xy(2), Block::cp2_fake(), Block::e8(1), Block::neg_k3(), Block::w()}));
}

TEST_CASE("parse errors carry offsets") {
  auto failure = [](std::string_view text) -> std::pair<ErrorCode, std::size_t> {
    try {
      cli::parse(text);
    } catch (const ParseFailure& e) {
      return {e.code(), e.offset()};
    }
    FAIL("no error raised");
    return {ErrorCode::ParseError, 0};
  };
  CHECK(failure("S2xSigma(g=0)").first == ErrorCode::GenusZero);
  CHECK(failure("-2*CP2").first == ErrorCode::NegativeMultiplicity);
  CHECK(failure("CP2 # Q").first == ErrorCode::ParseError);
  CHECK(failure("CP2 # Q").second == 6);
  CHECK(failure("CP2 #").first == ErrorCode::ParseError);
  CHECK(failure("").first == ErrorCode::ParseError);
  CHECK(failure("CP2 CP2").second == 4);
  CHECK(failure("S1xY(b1=)").first == ErrorCode::ParseError);
  CHECK(failure("99999999*CP2").first == ErrorCode::ParseError);
}

TEST_CASE("property: parse inverts render") {
  support::Rng rng(71);
  for (int trial = 0; trial < 300; ++trial) {
    const ManifoldExpr x(support::random_blocks(rng, 12));
    CHECK(cli::parse(cli::render(x)) == x);
  }
}

TEST_CASE("invariants command") {
  const auto o = run({"invariants", "Enriques"});
  CHECK(o.code == cli::kExitOk);
  CHECK(o.out.find("sigma: -8\n") != std::string::npos);
  CHECK(o.out.find("b2: 10\n") != std::string::npos);
  CHECK(o.out.find("ks: 0\n") != std::string::npos);
  CHECK(o.out.find("spin: false\n") != std::string::npos);
}

TEST_CASE("certify command") {
  const auto spin = run({"certify", "2*-E8 # 3*S2xS2 # S1xY(b1=1)", "--json"});
  CHECK(spin.code == cli::kExitOk);
  const auto doc = nlohmann::ordered_json::parse(spin.out);
  CHECK(doc["verdict"] == "NonSmoothable");
  CHECK(doc["theorem"] == "ThmB");
  CHECK(doc["base_dim"] == 2);
  CHECK(doc["witness_monomial"] == "t1*t2");
  CHECK(doc["index"]["complex_r_minus_s"] == 2);
  std::vector<std::string> keys;
  for (const auto& [k, v] : doc.items()) keys.push_back(k);
  CHECK(keys == std::vector<std::string>{"verdict", "theorem", "base_dim", "b_plus_ell",
                                         "witness_monomial", "c1_square", "sigma", "index",
                                         "inputs", "transcript"});
  CHECK(doc["inputs"]["expression"] == "2*-E8 # 3*S2xS2 # S1xY(b1=1)");

  const auto nonspin = run({"certify", "-E8 # -CP2fake # S2xS2 # S1xY(b1=1)", "--json"});
  const auto d2 = nlohmann::ordered_json::parse(nonspin.out);
  CHECK(d2["c1_square"] == -1);
  CHECK(d2["sigma"] == -9);
  CHECK(d2["theorem"] == "ThmA");

  const auto control = run({"certify", "CP2 # -CP2 # S1xY(b1=0)"});
  CHECK(control.code == cli::kExitInconclusive);
  CHECK(control.err.find("HypothesesNotMet") != std::string::npos);
  CHECK(control.err.find("|σ(M)|>8") != std::string::npos);

  const auto control_json = run({"certify", "CP2 # -CP2 # S1xY(b1=0)", "--json"});
  CHECK(control_json.code == cli::kExitInconclusive);
  const auto d3 = nlohmann::ordered_json::parse(control_json.out);
  CHECK(d3["verdict"] == "Inconclusive");
  CHECK(d3["c1_square"].is_null());
  bool explained = false;
  for (const auto& s : d3["transcript"])
    explained = explained || (s["fact"] == "hypothesis failed" && s["value"] == "|σ(M)|>8");
  CHECK(explained);

  const auto inconclusive = run({"certify", "3*S2xS2 # S1xY(b1=1)", "--scenario", "spin"});
  CHECK(inconclusive.code == cli::kExitInconclusive);
}

TEST_CASE("JSON output is deterministic") {
  const std::vector<std::string> args = {"certify", "Enriques # 2*-CP2 # S2xSigma(g=1)", "--json"};
  const auto a = run(args);
  const auto b = run(args);
  CHECK(a.code == cli::kExitOk);
  CHECK(a.out == b.out);
  const auto [code, text] = shell("certify 'Enriques # 2*-CP2 # S2xSigma(g=1)' --json");
  CHECK(code == 0);
  CHECK(text == a.out);
}

TEST_CASE("other commands") {
  CHECK(run({"classify", "K3"}).out.find("normal form: 2*-E8 # 3*S2xS2") != std::string::npos);
  const auto cov = run({"cover", "Enriques # S1xY(b1=0)"});
  CHECK(cov.code == cli::kExitOk);
  CHECK(cov.out.find("b_plus_ell: 1") != std::string::npos);
  CHECK(cov.out.find("torsion_bits: 1") != std::string::npos);
  const auto sp = run({"spinc", "CP2 # -CP2 # S1xY(b1=0)"});
  CHECK(sp.out.rfind("4 classes\n", 0) == 0);
  CHECK(run({"spinc", "CP2 # S1xY(b1=0)", "--bound", "2"}).out.rfind("2 classes\n", 0) == 0);
  const auto blocks = run({"blocks"});
  CHECK(nlohmann::json::parse(blocks.out) == nlohmann::json::parse(manifold::block_table_json()));
}

TEST_CASE("constraints command") {
  const std::string x = "-E8 # -CP2fake # 2*S2xS2 # S1xY(b1=1)";
  const auto trivial = run({"constraints", x, "--data", data_file("index_trivial.txt")});
  CHECK(trivial.code == cli::kExitOk);
  CHECK(trivial.out.find("n-m: -2") != std::string::npos);
  CHECK(trivial.out.find("result: Incompatible") != std::string::npos);

  const auto line = run({"constraints", x, "--data", data_file("index_line.txt")});
  CHECK(line.code == cli::kExitOk);
  CHECK(line.out.find("n-m: 1") != std::string::npos);
  CHECK(line.out.find("result: Compatible") != std::string::npos);

  CHECK(run({"constraints", x, "--data", data_file("missing.txt")}).code == cli::kExitInputError);
}

TEST_CASE("constraints parser") {
  const auto [v, w] = cli::parse_constraints("# c\nV1\nrank 2\nw_1 = t1 + t2\nW1\nrank 0\n", 2);
  CHECK(v.rank == 2);
  CHECK(v.w(1) == charpoly::ExtPoly::parse("t1 + t2", 2));
  CHECK(w.rank == 0);
  auto code = [](std::string_view text) {
    try {
      cli::parse_constraints(text, 2);
    } catch (const Error& e) {
      return e.code();
    }
    FAIL("no error raised");
    return ErrorCode::Overflow;
  };
  CHECK(code("V1\nrank 1\nw_2 = t1*t2\nW1\nrank 0\n") == ErrorCode::RankMismatch);
  CHECK(code("V1\nrank 1\n") == ErrorCode::ParseError);
  CHECK(code("V1\nrank 1\nw_1 = t3\nW1\nrank 0\n") == ErrorCode::ParseError);
  CHECK(code("V1\nbogus\nW1\nrank 0\n") == ErrorCode::ParseError);
}

TEST_CASE("exit codes partition into 0, 1 and 3") {
  CHECK(run({"invariants", "CP2 # Q"}).code == cli::kExitInputError);
  CHECK(run({"invariants", "S2xSigma(g=0)"}).code == cli::kExitInputError);
  CHECK(run({"frobnicate"}).code == cli::kExitInputError);
  CHECK(run({}).code == cli::kExitInputError);
  CHECK(run({"classify", "3*-CP2"}).code == cli::kExitInputError);
  CHECK(run({"--help"}).code == cli::kExitOk);

  CHECK(shell("invariants K3").first == 0);
  CHECK(shell("certify 'CP2 # -CP2 # S1xY(b1=1)'").first == 3);
  CHECK(shell("invariants 'K3 #'").first == 1);
  CHECK(shell("certify - < /dev/null").first == 1);
  CHECK(shell("certify -", "2*-E8 # 3*S2xS2 # S1xY(b1=1)").first == 0);
  CHECK(shell("certify 'K3 # S2xSigma(g=1)' --bound 0").first == 1);
}

TEST_CASE("u-degree cap from the environment") {
  setenv("FOURFOLD_MAX_UDEG", "1", 1);
  const auto capped = run({"certify", "-E8 # -CP2fake # 2*S2xS2 # S1xY(b1=1)"});
  CHECK(capped.code == cli::kExitInputError);
  CHECK(capped.err.find("UDegreeOverflow") != std::string::npos);
  setenv("FOURFOLD_MAX_UDEG", "nope", 1);
  CHECK(run({"invariants", "K3"}).code == cli::kExitInputError);
  unsetenv("FOURFOLD_MAX_UDEG");
  charpoly::set_max_u_degree(charpoly::kDefaultMaxUDegree);
  CHECK(run({"certify", "2*-E8 # 3*S2xS2 # S1xY(b1=1)"}).code == cli::kExitOk);
}
