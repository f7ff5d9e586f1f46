#pragma once

// Directional derivatives, both sides of the chain rules, and the
// verification report.

#include <array>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "afc/normalize.hpp"

namespace afc {

/// ∇F(v;x) = D1 F(v) + D1^1 cr2 F(v, x).
Term nabla_expansion(const Functor& f, const Term& v, const Term& x);

/// Δ0 F(x) = F(x); Δ1 = ∇; Δ2 F(w, v; x) is the four-summand form with the
/// duplicated direction v renamed to vbar when v is a variable. Atomic heads
/// use slot marks, composite heads use Lin binders (and need variable
/// directions).
Term delta_expansion(int order, const Functor& f, const std::vector<Term>& directions, const Term& x);

/// Expansion of a Delta or Nabla node; nullopt when it cannot be expanded
/// (composite head with a non-variable direction).
std::optional<Term> expand_derivative(const Term& t);

/// Δ_order(F∘G)(w, v; x) and Δ_order F(Δ-tower of G; G(x)).
Term chain_rule_lhs(int order, const Functor& f, const Functor& g);
Term chain_rule_rhs(int order, const Functor& f, const Functor& g);

struct Sides {
  NormalForm lhs;
  NormalForm rhs;
};

Sides expand_sides(int order, const Functor& f, const Functor& g, const NormalizeOptions& opts = {});

/// LHS summands before the composition lemmas and linearization collapses
/// are applied (the 31 summands at order 2).
std::vector<Term> lhs_presplit(int order, const Functor& f, const Functor& g, const NormalizeOptions& opts = {});

enum class ProofType { Type1 = 1, Type2, Type3, Type4, Type5 };

struct PairingEntry {
  std::string lhs_label;  // A1 ... A31
  Term lhs_summand;       // pre-split form
  std::vector<Term> lhs_atoms;
  std::vector<std::string> rhs_labels;  // B.. / C1
  ProofType type;
};

struct VerificationReport {
  int order = 2;
  NormalForm lhs;
  NormalForm rhs;
  bool equal = false;
  std::vector<PairingEntry> pairing;
  std::vector<Term> only_lhs;  // multiset difference, after alias collapse
  std::vector<Term> only_rhs;

  std::array<int, 5> group_sizes() const;
};

VerificationReport verify_chain_rule(int order, const Functor& f, const Functor& g, const NormalizeOptions& opts = {});

/// The labelled summand lists (text grammar, functors named F and G).
struct LabelledTerm {
  std::string label;
  std::string text;
};
const std::vector<LabelledTerm>& lhs_catalog();  // A1..A31
const std::vector<LabelledTerm>& rhs_catalog();  // B1..B31 and C1

/// Rename functor atoms by name (composites included).
Term rename_functors(const Term& t, const std::map<std::string, std::string>& renaming);

nlohmann::json to_json(const VerificationReport& r, bool with_trace = false);
nlohmann::json to_json(const NormalForm& nf, bool with_trace = true);

}  // namespace afc
