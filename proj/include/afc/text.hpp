#pragma once

// Text, LaTeX and JSON forms of terms.
//
// Text grammar (whitespace-insensitive):
//
//   term    := summand ('+' summand)*
//   summand := '0' | var | '(' term ')'
//            | 'D1[' var ']' summand                 simultaneous linearization
//            | ('D1' | 'D1^' int)* app               per-slot marks (D1 alone = slot 1)
//            | 'Delta' int functor '(' [terms ';'] term ')'
//            | 'Nabla' functor '(' term ';' term ')'
//   app     := 'cr' int functor '(' terms ')' | functor '(' terms ')' | X0
//   functor := Name | '(' Name ('.' Name)+ ')'
//
// Names starting upper-case are functors (`Id` is the identity), lower-case
// are variables. `X0` is the constant-at-zero atom of X; `X(0)` reads as the
// application and canonicalizes to `X0`.

#include <string>
#include <string_view>

#include <json.hpp>

#include "afc/term.hpp"

namespace afc {

Term parse_term(std::string_view text);
Functor parse_functor(std::string_view text);

std::string to_text(const Term& t);
std::string to_text(const Functor& f);

std::string to_latex(const Term& t);
std::string to_latex(const Functor& f);

nlohmann::json to_json(const Term& t);
nlohmann::json to_json(const Functor& f);
Term term_from_json(const nlohmann::json& j);
Functor functor_from_json(const nlohmann::json& j);

}  // namespace afc
