#include <catch_amalgamated.hpp>

#include "afc/calculus.hpp"
#include "afc/normalize.hpp"
#include "afc/rules.hpp"
#include "afc/text.hpp"
#include "support/print.hpp"

using namespace afc;

namespace {

Term T(const std::string& s) { return canonicalize(parse_term(s)); }

Term step(RuleId r, const std::string& s) {
  auto out = rewrite_at(r, T(s), nullptr);
  REQUIRE(out.has_value());
  return canonicalize(*out);
}

Term nf(const std::string& s) { return normalize(T(s)).to_term(); }

}  // namespace

TEST_CASE("rule catalog") {
  CHECK(rule_catalog().size() == kAllRules.size());
  std::set<std::string> names;
  for (const auto& info : rule_catalog()) {
    names.insert(std::string(info.name));
    CHECK_FALSE(info.citation.empty());
    CHECK_FALSE(info.pattern.empty());
    CHECK(parse_rule_id(info.name) == info.id);
  }
  CHECK(names.size() == kAllRules.size());
  CHECK(parse_rule_id("r8a") == RuleId::R8a);
  CHECK_THROWS_AS(parse_rule_id("R10"), DomainError);
}

TEST_CASE("R1 splits a sum in a cross-effect slot") {
  CHECK(step(RuleId::R1, "cr2 F(x + v, w)") == T("cr2 F(x, w) + cr2 F(v, w) + cr3 F(x, v, w)"));
  CHECK(step(RuleId::R1, "F(x + v)") == T("cr1 F(x + v) + F0"));
  CHECK(nf("F(x + v)") == T("F0 + cr1 F(x) + cr1 F(v) + cr2 F(x, v)"));
}

TEST_CASE("R2 zero and identity laws") {
  CHECK(step(RuleId::R2, "cr3 F(x, 0, w)") == zero());
  CHECK(nf("cr2 F(0, x)") == zero());
  CHECK(nf("cr2 Id(x, w)") == zero());
  CHECK(nf("Id(x)") == var("x"));
}

TEST_CASE("R3 expands a cross effect of a composite over covers") {
  const Term expected = T(
      "cr1 F(cr2 G(x1, x2)) + cr2 F(cr2 G(x1, x2), G0) + cr2 F(cr1 G(x1), cr1 G(x2))"
      " + cr2 F(cr1 G(x1), cr2 G(x1, x2)) + cr2 F(cr1 G(x2), cr2 G(x1, x2))"
      " + cr3 F(cr1 G(x1), cr1 G(x2), G0) + cr3 F(cr1 G(x1), cr2 G(x1, x2), G0)"
      " + cr3 F(cr1 G(x2), cr2 G(x1, x2), G0) + cr3 F(cr1 G(x1), cr1 G(x2), cr2 G(x1, x2))"
      " + cr4 F(cr1 G(x1), cr1 G(x2), cr2 G(x1, x2), G0)");
  const Term got = step(RuleId::R3, "cr2 (F.G)(x1, x2)");
  CHECK(got == expected);
  CHECK(summands(got).size() == 10);
  CHECK(step(RuleId::R3, "cr1 (F.G)(x)") == T("cr1 F(cr1 G(x)) + cr2 F(cr1 G(x), G0)"));
  CHECK(nf("cr2 (F.Id)(x1, x2)") == T("cr2 F(x1, x2)"));
}

TEST_CASE("R4 distributes D1 over sums and drops constants") {
  CHECK(step(RuleId::R4, "D1[v] (F(v) + G(v))") == T("D1[v] F(v) + D1[v] G(v)"));
  CHECK(step(RuleId::R4, "D1[v] cr2 F(x, w)") == zero());
  // Reached through R1 and R5: the cr3 cross term has w in two slots.
  CHECK(nf("D1[w] cr2 F(D1 G(w) + D1^1 cr2 G(w, x), G0)") ==
        nf("D1[w] cr2 F(D1 G(w), G0) + D1[w] cr2 F(D1^1 cr2 G(w, x), G0)"));
}

TEST_CASE("R5 kills linearizations of diagonal cross effects") {
  CHECK(step(RuleId::R5, "D1[x2] cr2 F(cr1 G(x2), cr2 G(x1, x2))") == zero());
  CHECK(step(RuleId::R5, "D1[v] cr2 F(cr1 G(v), cr1 G(v))") == zero());
  CHECK_FALSE(rewrite_at(RuleId::R5, T("D1[v] cr2 F(cr1 G(v), cr1 G(x))"), nullptr).has_value());
}

TEST_CASE("R6 splits an unreduced application in a slot") {
  CHECK(step(RuleId::R6, "cr2 F(a, G(x))") == T("cr2 F(a, cr1 G(x) + G0)"));
  CHECK(nf("cr2 F(a, G(x))") == T("cr2 F(a, G0) + cr2 F(a, cr1 G(x)) + cr3 F(a, G0, cr1 G(x))"));
}

TEST_CASE("R7 chain rule for D1") {
  CHECK(nf("D1[w] (F.G)(w)") == nf("D1 F(D1 G(w)) + D1[w] cr2 F(cr1 G(w), G0)"));
  CHECK(nf("D1[w] cr2 F(cr2 G(w, x), G0)") == nf("D1^1 cr2 F(D1^1 cr2 G(w, x), G0)"));
  CHECK(nf("D1[w] cr1 F(cr2 G(w, x))") == nf("D1 cr1 F(D1^1 cr2 G(w, x))"));
}

TEST_CASE("R8 linearization idempotence") {
  CHECK(step(RuleId::R8a, "D1 cr1 F(x)") == T("D1 F(x)"));
  CHECK(step(RuleId::R8b, "D1 D1 F(x)") == T("D1 F(x)"));
  const Term target = T("D1 F(x)");
  CHECK(nf("D1 D1 cr1 F(x)") == target);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    NormalizeOptions o;
    o.strategy = Strategy::Random;
    o.seed = seed;
    CHECK(normalize(T("D1 D1 cr1 F(x)"), o).to_term() == target);
  }
}

TEST_CASE("R9 expands directional derivatives") {
  CHECK(step(RuleId::R9, "Nabla F(v; x)") == T("D1 F(v) + D1^1 cr2 F(v, x)"));
  CHECK(nf("Nabla F(v; 0)") == T("D1 F(v)"));
  CHECK(nf("Nabla Id(v; x)") == nf("D1 Id(v)"));
  CHECK(nf("Delta0 F(x)") == T("F(x)"));
  CHECK(nf("Delta2 F(w, v; x)") == T("D1 F(w) + D1^1 cr2 F(w, x) + D1^1 D1^2 cr2 F(v, vbar) + D1^1 D1^2 cr3 F(v, vbar, x)"));
  CHECK(nf("Delta1 F(v; 0)") == T("D1 F(v)"));
}

TEST_CASE("vanishing at zero") {
  CHECK(vanishes_at_zero(T("cr2 F(v, x)"), "v"));
  CHECK(vanishes_at_zero(T("D1[v] F(v)"), "v"));
  CHECK(vanishes_at_zero(T("cr1 G(v)"), "v"));
  CHECK_FALSE(vanishes_at_zero(T("G(v)"), "v"));
  CHECK_FALSE(vanishes_at_zero(T("cr2 F(w, x)"), "v"));
}

TEST_CASE("disabled rules produce no redexes") {
  const Term t = T("cr2 F(x + v, 0)");
  CHECK_FALSE(find_redexes(t, {}).empty());
  for (const auto& r : find_redexes(t, {RuleId::R1})) CHECK(r.rule != RuleId::R1);
}
