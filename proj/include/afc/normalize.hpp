#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "afc/rules.hpp"

namespace afc {

struct TraceStep {
  RuleId rule;
  Term before;  // the redex, as found in the canonical whole term
  Term after;   // canonical replacement
  std::string citation;
  Path path;  // position of `before` in the canonical whole term
};

struct NormalForm {
  std::vector<Term> atoms;  // sorted under the global order
  std::vector<TraceStep> trace;

  Term to_term() const;  // canonical direct sum of the atoms
  friend bool operator==(const NormalForm& a, const NormalForm& b) { return a.atoms == b.atoms; }
};

enum class Strategy {
  Priority,  // fixed rule priority, leftmost-outermost within the first reducible summand
  Random,    // uniform over all redexes, seeded
};

std::size_t default_step_bound();  // 100000, or AFC_STEP_BOUND when set

struct NormalizeOptions {
  RuleSet disabled;
  std::size_t step_bound = default_step_bound();
  Strategy strategy = Strategy::Priority;
  std::uint64_t seed = 0;
  bool record_trace = true;
  std::size_t size_bound = 0;  // nodes per rewritten summand; 0 for no limit
};

class FuelExhausted : public ResourceError {
 public:
  FuelExhausted(std::size_t bound, Term partial, std::vector<TraceStep> trace);
  const Term& partial() const { return partial_; }
  const std::vector<TraceStep>& trace() const { return trace_; }

 private:
  Term partial_;
  std::vector<TraceStep> trace_;
};

class TermTooLarge : public ResourceError {
 public:
  explicit TermTooLarge(std::size_t bound);
};

/// Rewrite to a fixpoint. Every step is checked to strictly decrease the
/// termination measure of the redex (InvariantViolation otherwise).
NormalForm normalize(const Term& t, const NormalizeOptions& opts = {});

/// Replay a trace from `input`; each step must find its `before` at its path.
Term replay(const Term& input, const std::vector<TraceStep>& trace);

/// Lexicographic termination measure:
///   Delta/Nabla nodes, composite heads, slot sums + 2 * unreduced bare
///   applications, total Lin body size, redundant marks and identities, size.
std::array<std::size_t, 6> measure(const Term& t);

/// align* derivation with one line per step.
std::string trace_to_latex(const Term& input, const std::vector<TraceStep>& trace);

}  // namespace afc
