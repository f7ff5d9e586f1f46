// afc: command-line front end.
// Exit status: 0 ok, 1 verification mismatch, 2 usage error, 3 internal invariant failure.

#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "afc/calculus.hpp"
#include "afc/concrete/evaluate.hpp"
#include "afc/covers.hpp"
#include "afc/normalize.hpp"
#include "afc/text.hpp"

namespace {

using afc::Functor;
using afc::FunctorAtom;
using afc::Term;

constexpr int kOk = 0;
constexpr int kMismatch = 1;
constexpr int kUsage = 2;
constexpr int kInternal = 3;

const std::vector<std::string> kFormats{"text", "json", "latex"};

afc::RuleSet parse_disabled(const std::vector<std::string>& names) {
  afc::RuleSet out;
  for (const auto& n : names) out.insert(afc::parse_rule_id(n));
  return out;
}

void print_terms(const std::vector<Term>& ts, const std::string& format) {
  if (format == "json") {
    nlohmann::json j = nlohmann::json::array();
    for (const auto& t : ts) j.push_back(afc::to_json(t));
    std::cout << j.dump(2) << "\n";
  } else if (format == "latex") {
    std::cout << "\\begin{align*}\n";
    for (std::size_t i = 0; i < ts.size(); ++i) {
      std::cout << "  " << (i ? "\\oplus " : "") << afc::to_latex(ts[i]) << " \\\\\n";
    }
    std::cout << "\\end{align*}\n";
  } else {
    for (const auto& t : ts) std::cout << afc::to_text(t) << "\n";
  }
}

void print_diff(const afc::VerificationReport& r) {
  std::cout << "only on the left (" << r.only_lhs.size() << "):\n";
  for (const auto& t : r.only_lhs) std::cout << "  - " << afc::to_text(t) << "\n";
  std::cout << "only on the right (" << r.only_rhs.size() << "):\n";
  for (const auto& t : r.only_rhs) std::cout << "  + " << afc::to_text(t) << "\n";
}

struct VerifyArgs {
  int order = 2;
  bool emit_pairing = false;
  bool inner_identity = false;
  std::string format = "text";
  std::vector<std::string> disable;
};

int run_verify(const VerifyArgs& a) {
  afc::NormalizeOptions opts;
  opts.disabled = parse_disabled(a.disable);
  opts.record_trace = a.format == "json";
  const Functor f(FunctorAtom::abstract("F"));
  const Functor g = a.inner_identity ? Functor(FunctorAtom::identity()) : Functor(FunctorAtom::abstract("G"));
  const auto r = afc::verify_chain_rule(a.order, f, g, opts);
  if (a.format == "json") {
    std::cout << afc::to_json(r, false).dump(2) << "\n";
    return r.equal ? kOk : kMismatch;
  }
  std::cout << "order " << a.order << ": " << (r.equal ? "equal" : "mismatch") << " (" << r.lhs.atoms.size()
            << " lhs atoms, " << r.rhs.atoms.size() << " rhs atoms)\n";
  if (!r.equal) {
    print_diff(r);
    return kMismatch;
  }
  if (a.emit_pairing && !r.pairing.empty()) {
    for (const auto& p : r.pairing) {
      std::cout << p.lhs_label << "\tType" << static_cast<int>(p.type) << "\t";
      for (std::size_t i = 0; i < p.rhs_labels.size(); ++i) std::cout << (i ? " + " : "") << p.rhs_labels[i];
      std::cout << "\t" << afc::to_text(p.lhs_summand) << "\n";
    }
    const auto g5 = r.group_sizes();
    std::cout << "group sizes: " << g5[0] << "/" << g5[1] << "/" << g5[2] << "/" << g5[3] << "/" << g5[4] << "\n";
  }
  return kOk;
}

struct ExpandArgs {
  std::string side = "lhs";
  int order = 2;
  std::string stage = "normal";
  std::string format = "text";
  bool trace = false;
};

int run_expand(const ExpandArgs& a) {
  const Functor f(FunctorAtom::abstract("F"));
  const Functor g(FunctorAtom::abstract("G"));
  if (a.stage == "presplit") {
    if (a.side != "lhs") throw CLI::ValidationError("--stage presplit", "only the left-hand side has a pre-split stage");
    print_terms(afc::lhs_presplit(a.order, f, g), a.format);
    return kOk;
  }
  const Term input = a.side == "lhs" ? afc::chain_rule_lhs(a.order, f, g) : afc::chain_rule_rhs(a.order, f, g);
  afc::NormalizeOptions opts;
  opts.record_trace = a.trace;
  const auto nf = afc::normalize(input, opts);
  if (a.trace && a.format == "latex") {
    std::cout << afc::trace_to_latex(input, nf.trace);
  } else if (a.trace && a.format == "json") {
    std::cout << afc::to_json(nf, true).dump(2) << "\n";
  } else {
    print_terms(nf.atoms, a.format);
  }
  return kOk;
}

struct NormalizeArgs {
  std::string term;
  std::string format = "text";
  bool trace = false;
  std::string strategy = "priority";
  std::uint64_t seed = 0;
  std::vector<std::string> disable;
};

int run_normalize(const NormalizeArgs& a) {
  const Term input = afc::parse_term(a.term);
  afc::NormalizeOptions opts;
  opts.disabled = parse_disabled(a.disable);
  opts.strategy = a.strategy == "random" ? afc::Strategy::Random : afc::Strategy::Priority;
  opts.seed = a.seed;
  opts.record_trace = a.trace;
  const auto nf = afc::normalize(input, opts);
  if (a.format == "json") {
    std::cout << afc::to_json(nf, a.trace).dump(2) << "\n";
  } else if (a.format == "latex" && a.trace) {
    std::cout << afc::trace_to_latex(input, nf.trace);
  } else if (a.format == "latex") {
    std::cout << afc::to_latex(nf.to_term()) << "\n";
  } else {
    if (nf.atoms.empty()) std::cout << "0\n";
    for (const auto& t : nf.atoms) std::cout << afc::to_text(t) << "\n";
    if (a.trace) {
      for (const auto& st : nf.trace) {
        std::cout << "  [" << afc::rule_name(st.rule) << "] " << afc::to_text(st.before) << "  =>  "
                  << afc::to_text(st.after) << "\n";
      }
    }
  }
  return kOk;
}

int run_covers(int p, const std::string& format) {
  const auto cs = afc::enumerate_covers(p);
  if (format == "json") {
    nlohmann::json j = nlohmann::json::array();
    for (const auto& c : cs) {
      nlohmann::json sets = nlohmann::json::array();
      for (auto s : c.sets) sets.push_back(afc::subset_to_string(s));
      j.push_back(sets);
    }
    std::cout << nlohmann::json{{"p", p}, {"count", cs.size()}, {"covers", j}}.dump(2) << "\n";
    return kOk;
  }
  for (const auto& c : cs) std::cout << afc::to_string(c) << "\n";
  std::cout << cs.size() << " covers\n";
  return kOk;
}

struct ConcreteArgs {
  std::string rule;
  std::vector<std::string> functors;
  std::optional<std::size_t> dim;
  std::optional<int> truncate;
  std::string format = "text";
};

int run_concrete(const ConcreteArgs& a) {
  afc::concrete::CheckOverrides o;
  for (const auto& spec : a.functors) {
    const auto eq = spec.find('=');
    if (eq == std::string::npos || eq == 0) throw CLI::ValidationError("--functor", "expected NAME=SPEC, got '" + spec + "'");
    const std::string rhs = spec.substr(eq + 1);
    afc::concrete::parse_functor_spec(rhs);  // reject bad specs before running
    o.functors[spec.substr(0, eq)] = rhs;
  }
  o.dim = a.dim;
  o.top = a.truncate;
  const auto c = afc::concrete::check_rule_concrete(afc::parse_rule_id(a.rule), o);
  if (a.format == "json") {
    std::cout << afc::concrete::to_json(c).dump(2) << "\n";
  } else {
    std::cout << afc::rule_name(c.rule) << ": " << c.description << "\n";
    std::cout << "  lhs: " << afc::to_text(c.lhs) << "\n  rhs: " << afc::to_text(c.rhs) << "\n";
    for (const auto& [k, v] : c.functors) std::cout << "  " << k << " = " << v << "\n";
    std::cout << "  dim " << c.dim << ", truncated at degree " << c.top << "\n";
    if (!c.supported) {
      std::cout << "  unsupported shape: " << c.reason << "\n";
    } else {
      for (std::size_t k = 0; k < c.lhs_homology.size(); ++k) {
        std::cout << "  H" << k << ": " << c.lhs_homology[k] << " vs " << c.rhs_homology[k]
                  << (c.lhs_homology[k] == c.rhs_homology[k] ? "  ok" : "  DIFFER") << "\n";
      }
    }
  }
  return c.supported && !c.agree() ? kMismatch : kOk;
}

int run_rules() {
  for (const auto& info : afc::rule_catalog()) {
    std::cout << info.name << "\t" << info.pattern << "\n\t" << info.citation << "\n";
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Symbolic abelian functor calculus: chain rule verification and concrete checks"};
  app.require_subcommand(1);

  int cover_p = 2;
  std::string cover_format = "text";
  auto* covers = app.add_subcommand("covers", "enumerate covers of {1..p}");
  covers->add_option("-p", cover_p, "size of the index set")->required()->check(CLI::Range(1, 16));
  covers->add_option("--format", cover_format)->check(CLI::IsMember({"text", "json"}));

  ExpandArgs ex;
  auto* expand = app.add_subcommand("expand", "expand one side of the chain rule");
  expand->add_option("--side", ex.side)->check(CLI::IsMember({"lhs", "rhs"}));
  expand->add_option("--order", ex.order)->check(CLI::IsMember({1, 2}));
  expand->add_option("--stage", ex.stage)->check(CLI::IsMember({"presplit", "normal"}));
  expand->add_option("--format", ex.format)->check(CLI::IsMember(kFormats));
  expand->add_flag("--trace", ex.trace, "emit the rewrite derivation");

  NormalizeArgs nm;
  auto* norm = app.add_subcommand("normalize", "normalize a term");
  norm->add_option("--term", nm.term)->required();
  norm->add_option("--format", nm.format)->check(CLI::IsMember(kFormats));
  norm->add_flag("--trace", nm.trace);
  norm->add_option("--strategy", nm.strategy)->check(CLI::IsMember({"priority", "random"}));
  norm->add_option("--seed", nm.seed);
  norm->add_option("--disable", nm.disable, "rules to switch off")->delimiter(',');

  VerifyArgs vf;
  auto* verify = app.add_subcommand("verify", "verify the chain rule for abstract F, G");
  verify->add_option("--order", vf.order)->check(CLI::IsMember({1, 2}));
  verify->add_flag("--emit-pairing", vf.emit_pairing);
  verify->add_flag("--inner-identity", vf.inner_identity, "take G to be the identity functor");
  verify->add_option("--format", vf.format)->check(CLI::IsMember({"text", "json"}));
  verify->add_option("--disable", vf.disable, "rules to switch off")->delimiter(',');

  ConcreteArgs cc;
  auto* conc = app.add_subcommand("concrete", "compare homology of a rule instance on concrete functors");
  conc->add_option("--rule", cc.rule)->required();
  conc->add_option("--functor", cc.functors, "NAME=SPEC, e.g. F=T2+Id");
  conc->add_option("--dim", cc.dim)->check(CLI::Range(0, 4));
  conc->add_option("--truncate", cc.truncate)->check(CLI::Range(1, 3));
  conc->add_option("--format", cc.format)->check(CLI::IsMember({"text", "json"}));

  auto* rules = app.add_subcommand("rules", "list the rewrite rules");

  try {
    app.parse(argc, argv);
    if (*covers) return run_covers(cover_p, cover_format);
    if (*expand) return run_expand(ex);
    if (*norm) return run_normalize(nm);
    if (*verify) return run_verify(vf);
    if (*conc) return run_concrete(cc);
    if (*rules) return run_rules();
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  } catch (const afc::InvariantViolation& e) {
    std::cerr << "internal invariant failure: " << e.what() << "\n";
    return kInternal;
  } catch (const afc::FuelExhausted& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInternal;
  } catch (const afc::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}
