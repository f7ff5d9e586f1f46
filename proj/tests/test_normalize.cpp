#include <catch_amalgamated.hpp>

#include <chrono>
#include <cstdlib>
#include <optional>

#include "afc/calculus.hpp"
#include "afc/normalize.hpp"
#include "afc/text.hpp"
#include "support/print.hpp"
#include "support/corpus.hpp"

using namespace afc;
using afc::testing::corpus;

namespace {

Term T(const std::string& s) { return canonicalize(parse_term(s)); }

Term nf(const Term& t, NormalizeOptions o = {}) { return normalize(t, o).to_term(); }

Term chain_lhs() {
  return chain_rule_lhs(2, Functor(FunctorAtom::abstract("F")), Functor(FunctorAtom::abstract("G")));
}

struct EnvGuard {
  explicit EnvGuard(const char* value) {
    if (value) ::setenv("AFC_STEP_BOUND", value, 1);
    else ::unsetenv("AFC_STEP_BOUND");
  }
  ~EnvGuard() { ::unsetenv("AFC_STEP_BOUND"); }
};

}  // namespace

TEST_CASE("zero annihilates") {
  CHECK(nf(T("cr2 F(0, x)")) == zero());
  CHECK(nf(T("cr3 (F.G)(x, 0, w)")) == zero());
  CHECK(nf(T("D1[v] cr2 F(x, w)")) == zero());
  CHECK(normalize(zero()).atoms.empty());
}

TEST_CASE("normal forms are fixpoints") {
  for (const auto& t : corpus(31, 40)) {
    INFO(to_text(t));
    const auto once = normalize(t);
    const auto twice = normalize(once.to_term());
    REQUIRE(twice == once);
    REQUIRE(twice.trace.empty());
  }
}

TEST_CASE("renaming variables commutes with normalization") {
  const std::map<std::string, std::string> swap{{"x", "w"}, {"w", "x"}, {"xbar", "wbar"}, {"wbar", "xbar"}};
  for (const auto& t : corpus(32, 40)) {
    INFO(to_text(t));
    REQUIRE(nf(canonicalize(rename_vars(t, swap))) == canonicalize(rename_vars(nf(t), swap)));
  }
}

TEST_CASE("traces replay and every step lowers the measure of its redex") {
  std::vector<Term> inputs = corpus(33, 30);
  inputs.push_back(chain_lhs());
  for (const auto& t : inputs) {
    INFO(to_text(t));
    const auto r = normalize(t);
    REQUIRE(canonicalize(replay(t, r.trace)) == r.to_term());
    for (const auto& st : r.trace) {
      // Multiset order: each summand of the result sits below the redex.
      for (const auto& s : summands(st.after)) REQUIRE(measure(s) < measure(st.before));
      REQUIRE_FALSE(st.citation.empty());
    }
  }
}

TEST_CASE("tampered traces do not replay") {
  const Term t = T("cr2 F(x + v, w)");
  auto r = normalize(t);
  REQUIRE_FALSE(r.trace.empty());
  r.trace.front().path.push_back(7);
  CHECK_THROWS_AS(replay(t, r.trace), Error);
}

TEST_CASE("a small step bound raises FuelExhausted with a partial term") {
  NormalizeOptions o;
  o.step_bound = 5;
  try {
    normalize(chain_lhs(), o);
    FAIL("expected FuelExhausted");
  } catch (const FuelExhausted& e) {
    CHECK(e.trace().size() == 5);
    CHECK(e.partial().size() > 0);
  }
}

TEST_CASE("AFC_STEP_BOUND sets the default bound") {
  {
    EnvGuard g(nullptr);
    CHECK(default_step_bound() == 100000);
  }
  {
    EnvGuard g("12");
    CHECK(default_step_bound() == 12);
    CHECK_THROWS_AS(normalize(chain_lhs()), FuelExhausted);
  }
  for (const char* bad : {"0", "-3", "12x", "lots"}) {
    EnvGuard g(bad);
    CHECK_THROWS_AS(default_step_bound(), DomainError);
  }
}

TEST_CASE("LaTeX traces are an align* block with one line per step") {
  const Term t = T("cr2 F(x + v, 0)");
  const auto r = normalize(t);
  const std::string s = trace_to_latex(t, r.trace);
  CHECK(s.rfind("\\begin{align*}", 0) == 0);
  CHECK(s.find("\\end{align*}") != std::string::npos);
  std::size_t lines = 0;
  for (char c : s) lines += c == '\n';
  CHECK(lines == r.trace.size() + 3);
}

TEST_CASE("disabled rules are never applied") {
  NormalizeOptions o;
  o.disabled = {RuleId::R5};
  const auto r = normalize(chain_lhs(), o);
  for (const auto& st : r.trace) CHECK(st.rule != RuleId::R5);
}

TEST_CASE("random rewrite orders reach the same normal form") {
  const auto t0 = std::chrono::steady_clock::now();
  const auto r = afc::testing::confluence(34, 50, 100);
  INFO(r.first_mismatch);
  CHECK(r.kept == 50);
  CHECK(r.mismatches == 0);
  CHECK(r.dropped < 50);
  CHECK(std::chrono::steady_clock::now() - t0 < std::chrono::seconds(60));
}
