#include "afc/normalize.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <random>

#include "afc/text.hpp"

namespace afc {

namespace {

constexpr std::size_t kDefaultStepBound = 100000;

struct Counts {
  std::array<std::size_t, 6> m{};
};

bool bare_unreduced(const Term& t) {
  return t.is(Kind::Apply) && t.head().is_atom() && t.head().atom().role == AtomRole::Abstract &&
         !t.head().atom().reduced && !t.any_mark() && !t.kid(0).is_zero();
}

void tally(const Term& t, Counts& c) {
  auto& m = c.m;
  if (t.is(Kind::Delta) || t.is(Kind::Nabla)) ++m[0];
  if (t.is(Kind::Apply) || t.is(Kind::Cross) || t.is(Kind::Delta) || t.is(Kind::Nabla)) {
    m[1] += static_cast<std::size_t>(t.head().compose_count());
  }
  if (t.is(Kind::Apply) || t.is(Kind::Cross)) {
    for (const auto& k : t.kids()) {
      if (k.is(Kind::Sum)) m[2] += k.kids().size() - 1;
    }
    if (bare_unreduced(t)) m[2] += 2;
    if (t.is(Kind::Cross) && t.order() == 1 && t.any_mark()) ++m[4];
    for (int mk : t.marks()) m[4] += static_cast<std::size_t>(std::max(0, mk - 1));
    if (t.head().is_atom() && t.head().atom().is_identity()) ++m[4];
  }
  if (t.is(Kind::Lin)) m[3] += t.body().size();
  ++m[5];
  for (const auto& k : t.kids()) tally(k, c);
}

struct Entry {
  Term term;
  std::vector<Redex> redexes;
};

class Engine {
 public:
  explicit Engine(const NormalizeOptions& opts) : opts_(opts), rng_(opts.seed) {}

  NormalForm run(const Term& input) {
    for (const auto& s : summands(canonicalize(input))) insert(s);
    std::size_t steps = 0;
    while (true) {
      auto pick = choose();
      if (!pick) break;
      if (steps >= opts_.step_bound) throw FuelExhausted(opts_.step_bound, current(), std::move(trace_));
      step(pick->first, pick->second);
      ++steps;
    }
    NormalForm nf;
    for (auto& e : state_) nf.atoms.push_back(e.term);
    nf.trace = std::move(trace_);
    return nf;
  }

 private:
  const NormalizeOptions& opts_;
  std::mt19937_64 rng_;
  std::vector<Entry> state_;  // sorted by term; each entry canonical and not a sum
  std::vector<TraceStep> trace_;

  Term current() const {
    std::vector<Term> ts;
    for (const auto& e : state_) ts.push_back(e.term);
    return canonicalize(sum(std::move(ts)));
  }

  void insert(const Term& s) {
    auto it = std::lower_bound(state_.begin(), state_.end(), s, [](const Entry& e, const Term& t) { return e.term < t; });
    state_.insert(it, Entry{s, find_redexes(s, opts_.disabled)});
  }

  std::optional<std::pair<std::size_t, std::size_t>> choose() {
    if (opts_.strategy == Strategy::Random) {
      std::size_t total = 0;
      for (const auto& e : state_) total += e.redexes.size();
      if (total == 0) return std::nullopt;
      std::size_t k = std::uniform_int_distribution<std::size_t>(0, total - 1)(rng_);
      for (std::size_t i = 0; i < state_.size(); ++i) {
        if (k < state_[i].redexes.size()) return std::make_pair(i, k);
        k -= state_[i].redexes.size();
      }
      return std::nullopt;
    }
    for (std::size_t i = 0; i < state_.size(); ++i) {
      const auto& rs = state_[i].redexes;
      if (rs.empty()) continue;
      std::size_t best = 0;
      for (std::size_t j = 1; j < rs.size(); ++j) {
        // Redexes that annihilate go first; they prune the most work.
        auto key = [&](const Redex& r) {
          return std::make_tuple(!r.result.is_zero(), rule_priority(r.rule), r.preorder, static_cast<int>(r.rule));
        };
        if (key(rs[j]) < key(rs[best])) best = j;
      }
      return std::make_pair(i, best);
    }
    return std::nullopt;
  }

  void step(std::size_t i, std::size_t j) {
    const Entry entry = state_[i];
    const Redex& r = entry.redexes[j];
    const Term& before = subterm(entry.term, r.path);
    Term after = canonicalize(r.result);
    const auto mb = measure(before);
    for (const auto& s : summands(after)) {
      if (!(measure(s) < mb)) {
        throw InvariantViolation(std::string("rule ") + std::string(rule_name(r.rule)) +
                                 " does not decrease the termination measure: " + to_text(before) + "  ->  " +
                                 to_text(after));
      }
    }
    Term rebuilt = canonicalize(replace_at(entry.term, r.path, after));
    if (opts_.size_bound > 0 && rebuilt.size() > opts_.size_bound) throw TermTooLarge(opts_.size_bound);
    if (opts_.record_trace) {
      Path global;
      if (state_.size() > 1) global.push_back(i);
      global.insert(global.end(), r.path.begin(), r.path.end());
      trace_.push_back(TraceStep{r.rule, before, after, std::string(rule_info(r.rule).citation), std::move(global)});
    }
    state_.erase(state_.begin() + static_cast<std::ptrdiff_t>(i));
    for (const auto& s : summands(rebuilt)) insert(s);
  }
};

}  // namespace

std::size_t default_step_bound() {
  const char* env = std::getenv("AFC_STEP_BOUND");
  if (env == nullptr || *env == '\0') return kDefaultStepBound;
  char* end = nullptr;
  unsigned long long v = std::strtoull(env, &end, 10);
  if (!std::isdigit(static_cast<unsigned char>(*env)) || *end != '\0' || v == 0) throw DomainError(std::string("invalid AFC_STEP_BOUND '") + env + "'");
  return static_cast<std::size_t>(v);
}

FuelExhausted::FuelExhausted(std::size_t bound, Term partial, std::vector<TraceStep> trace)
    : ResourceError("normalization did not terminate within " + std::to_string(bound) + " steps"),
      partial_(std::move(partial)),
      trace_(std::move(trace)) {}

TermTooLarge::TermTooLarge(std::size_t bound)
    : ResourceError("a summand grew beyond " + std::to_string(bound) + " nodes") {}

Term NormalForm::to_term() const { return canonicalize(sum(atoms)); }

std::array<std::size_t, 6> measure(const Term& t) {
  Counts c;
  tally(t, c);
  return c.m;
}

NormalForm normalize(const Term& t, const NormalizeOptions& opts) { return Engine(opts).run(t); }

Term replay(const Term& input, const std::vector<TraceStep>& trace) {
  Term cur = canonicalize(input);
  for (std::size_t k = 0; k < trace.size(); ++k) {
    const auto& st = trace[k];
    const Term* at = nullptr;
    try {
      at = &subterm(cur, st.path);
    } catch (const std::out_of_range&) {
      throw InvariantViolation("trace step " + std::to_string(k) + " has an invalid path");
    }
    if (!(*at == st.before)) {
      throw InvariantViolation("trace step " + std::to_string(k) + " (" + std::string(rule_name(st.rule)) +
                               ") does not match: found " + to_text(*at) + ", expected " + to_text(st.before));
    }
    cur = canonicalize(replace_at(cur, st.path, st.after));
  }
  return cur;
}

std::string trace_to_latex(const Term& input, const std::vector<TraceStep>& trace) {
  std::string out = "\\begin{align*}\n  & " + to_latex(canonicalize(input)) + " \\\\\n";
  for (const auto& st : trace) {
    out += "  " + to_latex(st.before) + " &\\simeq " + to_latex(st.after) + " && \\text{(" +
           std::string(rule_name(st.rule)) + ")} \\\\\n";
  }
  out += "\\end{align*}\n";
  return out;
}

}  // namespace afc
