#pragma once

// Evaluating symbolic terms on concrete functors.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "afc/concrete/complex.hpp"
#include "afc/error.hpp"
#include "afc/rules.hpp"
#include "afc/term.hpp"

namespace afc::concrete {

/// The term has a shape the evaluator does not model (Δ/∇ nodes, D_1 nested
/// inside a marked slot, repeated marks, ...).
class UnsupportedShape : public DomainError {
 public:
  using DomainError::DomainError;
};

struct Assignment {
  std::map<std::string, FunctorPtr> functors;  // by atom name
  std::map<std::string, std::size_t> dims;     // by variable name
  std::size_t default_dim = 1;
  int top = 2;  // truncation degree N

  std::size_t dim_of(const std::string& var) const;
  FunctorPtr functor(const std::string& name) const;
};

/// Direct sum over summands of each summand's complex. Plain terms sit in degree 0.
ChainComplex evaluate(const Term& t, const Assignment& a);

/// Homology H_0..H_{N-1} of evaluate(t, a).
std::vector<std::size_t> homology(const Term& t, const Assignment& a);

struct ConcreteCheck {
  RuleId rule;
  std::string description;
  Term lhs;
  Term rhs;  // produced by the rewrite engine, not typed in
  std::map<std::string, std::string> functors;
  std::size_t dim = 1;
  int top = 2;
  bool supported = false;
  std::string reason;  // why unsupported
  std::vector<std::size_t> lhs_homology;
  std::vector<std::size_t> rhs_homology;
  bool agree() const { return supported && lhs_homology == rhs_homology; }
};

struct CheckOverrides {
  std::map<std::string, std::string> functors;  // atom name -> functor spec
  std::optional<std::size_t> dim;               // applied to every variable
  std::optional<int> top;
};

/// Rewrites the built-in instance of rule r at its root and compares homology.
ConcreteCheck check_rule_concrete(RuleId r, const CheckOverrides& o = {});

nlohmann::json to_json(const ConcreteCheck& c);

}  // namespace afc::concrete
