#pragma once

// Rewrite rules over canonical terms.
//
// Every rule is rooted at one node; R6 and the R3 composite-application case
// also look at the enclosing node. A rule either fires (returning the
// replacement, not yet canonicalized) or does not apply.

#include <array>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "afc/term.hpp"

namespace afc {

enum class RuleId { R1, R2, R3, R4, R5, R6, R7a, R7b, R8a, R8b, R9 };

inline constexpr std::array<RuleId, 11> kAllRules = {RuleId::R1, RuleId::R2,  RuleId::R3,  RuleId::R4,
                                                     RuleId::R5, RuleId::R6,  RuleId::R7a, RuleId::R7b,
                                                     RuleId::R8a, RuleId::R8b, RuleId::R9};

struct RuleInfo {
  RuleId id;
  std::string_view name;
  std::string_view citation;
  std::string_view pattern;
};

const std::vector<RuleInfo>& rule_catalog();
const RuleInfo& rule_info(RuleId r);
std::string_view rule_name(RuleId r);
/// "R7a", "r7a" ... ; throws DomainError on unknown names.
RuleId parse_rule_id(std::string_view s);

/// Priority group used by the default strategy (smaller fires first).
int rule_priority(RuleId r);

using RuleSet = std::set<RuleId>;

/// Try `r` at the root of `t`. `parent` is the enclosing node, or nullptr.
std::optional<Term> rewrite_at(RuleId r, const Term& t, const Term* parent);

/// Structural test that t becomes the zero object when v is set to 0,
/// using only multi-reducedness of cross effects and linearizations.
bool vanishes_at_zero(const Term& t, const std::string& v);

struct Redex {
  RuleId rule;
  Path path;
  Term result;
  std::size_t preorder = 0;  // position of the redex node in a pre-order walk
};

/// All redexes of enabled rules in t, in pre-order.
std::vector<Redex> find_redexes(const Term& t, const RuleSet& disabled);

}  // namespace afc
