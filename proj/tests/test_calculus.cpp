#include <catch_amalgamated.hpp>

#include <algorithm>
#include <chrono>
#include <fstream>
#include <map>
#include <sstream>

#include "afc/calculus.hpp"
#include "afc/text.hpp"
#include "support/print.hpp"

using namespace afc;

namespace {

Term T(const std::string& s) { return canonicalize(parse_term(s)); }

const Functor F{FunctorAtom::abstract("F")};
const Functor G{FunctorAtom::abstract("G")};

// label -> tab-separated remainder, skipping '#' lines
std::vector<std::pair<std::string, std::string>> read_fixture(const std::string& name) {
  std::ifstream in(std::string(AFC_FIXTURE_DIR) + "/" + name);
  REQUIRE(in.good());
  std::vector<std::pair<std::string, std::string>> out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    const auto tab = line.find('\t');
    REQUIRE(tab != std::string::npos);
    out.emplace_back(line.substr(0, tab), line.substr(tab + 1));
  }
  return out;
}

std::vector<Term> sorted(std::vector<Term> v) {
  std::sort(v.begin(), v.end());
  return v;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) out.push_back(item);
  return out;
}

std::set<int> indices(const VerificationReport& r, ProofType t) {
  std::set<int> out;
  for (const auto& p : r.pairing) {
    if (p.type == t) out.insert(std::stoi(p.lhs_label.substr(1)));
  }
  return out;
}

}  // namespace

TEST_CASE("nabla and delta expansions") {
  CHECK(canonicalize(nabla_expansion(F, var("v"), var("x"))) == T("D1 F(v) + D1^1 cr2 F(v, x)"));
  CHECK(canonicalize(delta_expansion(0, F, {}, var("x"))) == T("F(x)"));
  CHECK(canonicalize(delta_expansion(1, F, {var("v")}, var("x"))) == T("D1 F(v) + D1^1 cr2 F(v, x)"));
  CHECK(canonicalize(delta_expansion(2, F, {var("w"), var("v")}, var("x"))) ==
        T("D1 F(w) + D1^1 cr2 F(w, x) + D1^1 D1^2 cr2 F(v, vbar) + D1^1 D1^2 cr3 F(v, vbar, x)"));
  CHECK_FALSE(expand_derivative(T("F(x)")).has_value());
  CHECK(expand_derivative(T("Nabla F(v; x)")).has_value());
}

TEST_CASE("second-order left side has 31 summands before the composite split") {
  const auto pre = lhs_presplit(2, F, G);
  CHECK(pre.size() == 31);
  std::vector<Term> golden;
  for (const auto& [label, text] : read_fixture("lhs_presplit.txt")) golden.push_back(T(text));
  REQUIRE(golden.size() == 31);
  CHECK(sorted(pre) == sorted(golden));
}

TEST_CASE("fixtures agree with the built-in catalogs") {
  const auto lhs = read_fixture("lhs_presplit.txt");
  REQUIRE(lhs.size() == lhs_catalog().size());
  for (std::size_t i = 0; i < lhs.size(); ++i) {
    CHECK(lhs[i].first == lhs_catalog()[i].label);
    CHECK(T(lhs[i].second) == T(lhs_catalog()[i].text));
  }
  const auto rhs = read_fixture("rhs.txt");
  REQUIRE(rhs.size() == rhs_catalog().size());
  for (std::size_t i = 0; i < rhs.size(); ++i) {
    CHECK(rhs[i].first == rhs_catalog()[i].label);
    CHECK(T(rhs[i].second) == T(rhs_catalog()[i].text));
  }
}

TEST_CASE("second-order chain rule sides match") {
  const auto t0 = std::chrono::steady_clock::now();
  const auto r = verify_chain_rule(2, F, G);
  CHECK(std::chrono::steady_clock::now() - t0 < std::chrono::seconds(5));
  CHECK(r.equal);
  CHECK(r.lhs.atoms.size() == 32);
  CHECK(r.rhs.atoms.size() == 32);
  CHECK(r.only_lhs.empty());
  CHECK(r.only_rhs.empty());

  std::vector<Term> golden;
  for (const auto& [label, text] : read_fixture("rhs.txt")) golden.push_back(T(text));
  REQUIRE(golden.size() == 32);
  // The catalog lists atoms after vbar is identified with v.
  std::vector<Term> collapsed;
  for (const auto& a : r.rhs.atoms) collapsed.push_back(collapse_aliases(a, {{"vbar", "v"}}));
  CHECK(sorted(collapsed) == sorted(golden));
}

TEST_CASE("pairing reproduces the five proof types") {
  const auto r = verify_chain_rule(2, F, G);
  REQUIRE(r.pairing.size() == 31);
  CHECK(r.group_sizes() == std::array<int, 5>{3, 3, 1, 10, 14});
  CHECK(indices(r, ProofType::Type1) == std::set<int>{3, 5, 7});
  CHECK(indices(r, ProofType::Type2) == std::set<int>{2, 4, 6});
  CHECK(indices(r, ProofType::Type3) == std::set<int>{1});
  CHECK(indices(r, ProofType::Type4) == std::set<int>{9, 13, 14, 15, 18, 19, 20, 23, 27, 31});
  CHECK(indices(r, ProofType::Type5) ==
        std::set<int>{8, 10, 11, 12, 16, 17, 21, 22, 24, 25, 26, 28, 29, 30});

  // Ai goes to Bi, and A1 also to C1.
  for (const auto& p : r.pairing) {
    const std::string b = "B" + p.lhs_label.substr(1);
    if (p.lhs_label == "A1") CHECK(p.rhs_labels == std::vector<std::string>{"B1", "C1"});
    else CHECK(p.rhs_labels == std::vector<std::string>{b});
  }

  std::map<std::string, std::pair<std::string, std::string>> fixture;
  for (const auto& [label, rest] : read_fixture("pairing.txt")) {
    const auto cols = split(rest, '\t');
    REQUIRE(cols.size() == 2);
    fixture[label] = {cols[0], cols[1]};
  }
  REQUIRE(fixture.size() == 31);
  for (const auto& p : r.pairing) {
    std::string joined;
    for (const auto& l : p.rhs_labels) joined += (joined.empty() ? "" : ",") + l;
    CHECK(fixture[p.lhs_label].first == "Type" + std::to_string(static_cast<int>(p.type)));
    CHECK(fixture[p.lhs_label].second == joined);
  }
}

TEST_CASE("pairing atoms partition the right side") {
  const auto r = verify_chain_rule(2, F, G);
  std::vector<Term> all;
  for (const auto& p : r.pairing) all.insert(all.end(), p.lhs_atoms.begin(), p.lhs_atoms.end());
  CHECK(sorted(all) == sorted(r.lhs.atoms));
}

TEST_CASE("first-order chain rule has 8 atoms per side") {
  // Δ1F(Δ1G(v;x); G(x)) by hand: D1 is additive in its marked slot, and the
  // unmarked slot splits G(x) = cr1 G(x) + G0 into three pieces.
  const std::vector<Term> hand = sorted({
      T("D1 F(D1 G(v))"),
      T("D1 F(D1^1 cr2 G(v, x))"),
      T("D1^1 cr2 F(D1 G(v), cr1 G(x))"),
      T("D1^1 cr2 F(D1 G(v), G0)"),
      T("D1^1 cr3 F(D1 G(v), cr1 G(x), G0)"),
      T("D1^1 cr2 F(D1^1 cr2 G(v, x), cr1 G(x))"),
      T("D1^1 cr2 F(D1^1 cr2 G(v, x), G0)"),
      T("D1^1 cr3 F(D1^1 cr2 G(v, x), cr1 G(x), G0)"),
  });
  const auto r = verify_chain_rule(1, F, G);
  CHECK(r.equal);
  CHECK(sorted(r.lhs.atoms) == hand);
  CHECK(sorted(r.rhs.atoms) == hand);
}

TEST_CASE("inner identity collapses both sides to the expansion of F") {
  const Functor id{FunctorAtom::identity()};
  const auto r = verify_chain_rule(2, F, id);
  CHECK(r.equal);
  CHECK(r.lhs.to_term() == normalize(delta_expansion(2, F, {var("w"), var("v")}, var("x"))).to_term());
}

TEST_CASE("renamed functors give the same verdict") {
  const Functor H{FunctorAtom::abstract("H")};
  const Functor K{FunctorAtom::abstract("K")};
  const auto r = verify_chain_rule(2, H, K);
  CHECK(r.equal);
  const auto base = verify_chain_rule(2, F, G);
  const std::map<std::string, std::string> m{{"F", "H"}, {"G", "K"}};
  std::vector<Term> renamed;
  for (const auto& a : base.lhs.atoms) renamed.push_back(canonicalize(rename_functors(a, m)));
  CHECK(sorted(renamed) == sorted(r.lhs.atoms));
}

TEST_CASE("disabling a load-bearing rule breaks the match") {
  for (RuleId rule : {RuleId::R3, RuleId::R5, RuleId::R6, RuleId::R7b, RuleId::R8a, RuleId::R8b}) {
    INFO(rule_name(rule));
    NormalizeOptions o;
    o.disabled = {rule};
    const auto r = verify_chain_rule(2, F, G, o);
    CHECK_FALSE(r.equal);
    CHECK(r.only_lhs.size() + r.only_rhs.size() > 0);
  }
}

TEST_CASE("random rule orders give the same chain-rule normal forms") {
  const auto base = expand_sides(2, F, G);
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    NormalizeOptions o;
    o.strategy = Strategy::Random;
    o.seed = seed;
    o.record_trace = false;
    const auto s = expand_sides(2, F, G, o);
    CHECK(s.lhs == base.lhs);
    CHECK(s.rhs == base.rhs);
  }
}

TEST_CASE("report JSON") {
  const auto r = verify_chain_rule(2, F, G);
  const auto j = to_json(r);
  CHECK(j["verdict"] == "equal");
  CHECK(j["order"] == 2);
  CHECK(j["group_sizes"] == nlohmann::json::array({3, 3, 1, 10, 14}));
  CHECK(j["lhs"]["atoms"].size() == 32);
  CHECK(j["pairing"].size() == 31);
  CHECK(j["pairing"][0]["lhs"] == "A1");
  for (const auto& a : j["rhs"]["atoms"]) CHECK_NOTHROW(term_from_json(a));

  NormalizeOptions o;
  o.disabled = {RuleId::R5};
  const auto bad = to_json(verify_chain_rule(2, F, G, o));
  CHECK(bad["verdict"] == "mismatch");
  CHECK_FALSE(bad["diff"]["only_lhs"].empty());
}
