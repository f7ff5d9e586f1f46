#include "afc/rules.hpp"

#include <algorithm>
#include <cctype>

#include "afc/calculus.hpp"
#include "afc/covers.hpp"

namespace afc {

namespace {

const std::vector<RuleInfo> kCatalog = {
    {RuleId::R1, "R1", "cross-effect recursion: cr_n F(a + b, ...) = cr_n F(a, ...) + cr_n F(b, ...) + cr_{n+1} F(a, b, ...), and F(y) = F(0) + cr_1 F(y)",
     "unmarked slot holding a direct sum; unmarked F(a + b)"},
    {RuleId::R2, "R2", "cross effects are multi-reduced; D_1 of a zero object vanishes; the identity is linear (cr_1 Id = Id, cr_n Id = 0 for n >= 2)",
     "zero slot; Id(a); cr_n Id"},
    {RuleId::R3, "R3", "cross effects of a composite: cr_p(F.G) = sum over covers U_1..U_k of <p> of cr_k F(cr_{U_1} G, ..., cr_{U_k} G), cr_{empty} G = G(0)",
     "cr_p (F.G)(...); (F.G)(t) = F(G(t))"},
    {RuleId::R4, "R4", "linearization is additive, D_1(A + B) = D_1 A + D_1 B, and vanishes on functors constant in the variable",
     "D1[v] (A + B); D1[v] A with v absent; marked slot holding a direct sum"},
    {RuleId::R5, "R5", "linearization of a diagonal followed by a strictly multi-reduced functor is contractible",
     "D1[v] cr_n F(..) with v in two or more slots, each reduced in v"},
    {RuleId::R6, "R6", "an unreduced argument splits as G(x) = cr_1 G(x) + G(0)",
     "unmarked G(t) in a slot of another functor"},
    {RuleId::R7a, "R7a", "chain rule for linearization through a reduced inner functor: D_1(F.G) ~ D_1 F . D_1 G",
     "D1[v] F(.., s, ..) with v only in s, s reduced in v or already linearized"},
    {RuleId::R7b, "R7b", "chain rule for linearization through an unreduced inner functor: D_1(F.G)(x) ~ D_1 F . D_1 G(x) + D_1^x cr_2 F(cr_1 G(x), G(0))",
     "D1[v] F(.., G(t), ..) with t reduced in v"},
    {RuleId::R8a, "R8a", "D_1 cr_1 F ~ D_1 F", "linearized slot of cr_1 F"},
    {RuleId::R8b, "R8b", "D_1 D_1 F ~ D_1 F", "slot linearized twice"},
    {RuleId::R9, "R9", "directional derivatives by their expansions: Nabla F(v;x) = D_1 F(v) + D_1^1 cr_2 F(v,x); Delta_2 F(w,v;x) = D_1 F(w) + D_1^1 cr_2 F(w,x) + D_1^1 D_1^2 cr_2 F(v,vbar) + D_1^1 D_1^2 cr_3 F(v,vbar,x)",
     "Delta/Nabla node with no Delta/Nabla below it"},
};

bool contains_derivative(const Term& t) {
  if (t.is(Kind::Delta) || t.is(Kind::Nabla)) return true;
  return std::any_of(t.kids().begin(), t.kids().end(), contains_derivative);
}

bool contains_composite(const Term& t) {
  if ((t.is(Kind::Apply) || t.is(Kind::Cross) || t.is(Kind::Delta) || t.is(Kind::Nabla)) && !t.head().is_atom()) {
    return true;
  }
  return std::any_of(t.kids().begin(), t.kids().end(), contains_composite);
}

bool abstract_head(const Term& t) {
  return t.head().is_atom() && t.head().atom().role == AtomRole::Abstract;
}

bool identity_head(const Term& t) { return t.head().is_atom() && t.head().atom().is_identity(); }

Term at_zero_of(const Functor& x) {
  if (x.atom().is_identity()) return zero();
  return app(FunctorAtom::at_zero(x.atom().name), {});
}

/// Unmarked G(t) for an abstract, unreduced G and t not the zero object.
bool bare_unreduced_app(const Term& t) {
  return t.is(Kind::Apply) && abstract_head(t) && !t.head().atom().reduced && !t.any_mark() && !t.kid(0).is_zero();
}

std::vector<Term> replaced(std::vector<Term> v, std::size_t i, Term r) {
  v[i] = std::move(r);
  return v;
}

// ------------------------------------------------------------------ R1

std::optional<Term> rule_split(const Term& t) {
  if (t.is(Kind::Cross)) {
    for (std::size_t i = 0; i < t.kids().size(); ++i) {
      const Term& s = t.kid(i);
      if (t.marked(i) || !s.is(Kind::Sum)) continue;
      Term a = s.kid(0);
      std::vector<Term> rest_kids(s.kids().begin() + 1, s.kids().end());
      Term rest = rest_kids.size() == 1 ? rest_kids.front() : sum(rest_kids);
      const int k = t.order();
      std::vector<Term> both = t.kids();
      both[i] = a;
      both.insert(both.begin() + static_cast<std::ptrdiff_t>(i) + 1, rest);
      std::vector<int> marks2 = t.marks();
      marks2.insert(marks2.begin() + static_cast<std::ptrdiff_t>(i) + 1, 0);
      return sum({cross(k, t.head(), replaced(t.kids(), i, a), t.marks()),
                  cross(k, t.head(), replaced(t.kids(), i, rest), t.marks()),
                  cross(k + 1, t.head(), std::move(both), std::move(marks2))});
    }
    return std::nullopt;
  }
  // F0 survives the split, so a summand that later reduces to 0 would leave
  // F0 + cr1 F(a) where the other order keeps F(a). Split normal sums only.
  if (t.is(Kind::Apply) && abstract_head(t) && !t.head().atom().is_constant() && !t.any_mark() &&
      t.kid(0).is(Kind::Sum) && find_redexes(t.kid(0), {}).empty()) {
    return sum({at_zero_of(t.head()), cross(1, t.head(), {t.kid(0)})});
  }
  return std::nullopt;
}

// ------------------------------------------------------------------ R2

std::optional<Term> rule_zero(const Term& t) {
  if (t.is(Kind::Cross)) {
    if (std::any_of(t.kids().begin(), t.kids().end(), [](const Term& k) { return k.is_zero(); })) return zero();
    if (identity_head(t)) return t.order() == 1 ? t.kid(0) : zero();
    return std::nullopt;
  }
  if (t.is(Kind::Apply) && !t.kids().empty()) {
    if (identity_head(t)) return t.kid(0);
    for (std::size_t i = 0; i < t.kids().size(); ++i) {
      if (t.marked(i) && t.kid(i).is_zero()) return zero();
    }
  }
  return std::nullopt;
}

// ------------------------------------------------------------------ R3

std::optional<Term> rule_composite(const Term& t, const Term* parent) {
  if (!t.is(Kind::Apply) && !t.is(Kind::Cross)) return std::nullopt;
  if (t.head().is_atom()) return std::nullopt;
  const Functor outer = t.head().outer();
  const Functor inner = t.head().inner();
  if (t.is(Kind::Apply)) {
    const Term& arg = t.kid(0);
    if (parent != nullptr && parent->is(Kind::Lin) && outer.is_atom() && occurs(arg, parent->name()) &&
        vanishes_at_zero(arg, parent->name())) {
      return std::nullopt;  // left to the linearization chain rule
    }
    return app(outer, {app(inner, {arg})});
  }
  // Covers copy arguments, so composites below must be expanded first.
  if (std::any_of(t.kids().begin(), t.kids().end(), contains_composite)) return std::nullopt;
  std::vector<Term> out;
  for (const Cover& c : enumerate_covers(t.order())) {
    std::vector<Term> slots;
    for (Subset u : c.sets) {
      if (u == 0) {
        slots.push_back(at_zero_of(inner));
        continue;
      }
      std::vector<Term> args;
      for (int j = 0; j < t.order(); ++j) {
        if ((u >> j & 1U) != 0) args.push_back(t.kid(static_cast<std::size_t>(j)));
      }
      const int n = static_cast<int>(args.size());
      slots.push_back(cross(n, inner, std::move(args)));
    }
    const int k = static_cast<int>(slots.size());
    out.push_back(cross(k, outer, std::move(slots)));
  }
  return sum(std::move(out));
}

// ------------------------------------------------------------------ R4

std::optional<Term> rule_distribute(const Term& t) {
  if (t.is(Kind::Lin)) {
    const Term& b = t.body();
    if (b.is_zero() || !occurs(b, t.name())) return zero();
    if (b.is(Kind::Sum)) {
      std::vector<Term> out;
      for (const auto& k : b.kids()) out.push_back(lin(t.name(), k));
      return sum(std::move(out));
    }
    return std::nullopt;
  }
  if (t.is(Kind::Apply) || t.is(Kind::Cross)) {
    for (std::size_t i = 0; i < t.kids().size(); ++i) {
      if (!t.marked(i) || !t.kid(i).is(Kind::Sum)) continue;
      std::vector<Term> out;
      for (const auto& k : t.kid(i).kids()) out.push_back(with_kids(t, replaced(t.kids(), i, k), t.marks()));
      return sum(std::move(out));
    }
  }
  return std::nullopt;
}

// ------------------------------------------------------------------ R5

std::optional<Term> rule_contract(const Term& t) {
  if (!t.is(Kind::Lin)) return std::nullopt;
  const std::string& v = t.name();
  const Term* b = &t.body();
  while (b->is(Kind::Lin)) b = &b->body();
  if (!b->is(Kind::Cross) || !b->head().is_atom()) return std::nullopt;
  int hits = 0;
  for (const auto& s : b->kids()) {
    if (!occurs(s, v)) continue;
    if (!vanishes_at_zero(s, v)) return std::nullopt;
    ++hits;
  }
  if (hits < 2) return std::nullopt;
  return zero();
}

// ------------------------------------------------------------------ R6

std::optional<Term> rule_unreduced(const Term& t) {
  if (!t.is(Kind::Apply) && !t.is(Kind::Cross)) return std::nullopt;
  if (!t.head().is_atom() || t.head().atom().is_constant()) return std::nullopt;
  for (std::size_t i = 0; i < t.kids().size(); ++i) {
    const Term& s = t.kid(i);
    if (!bare_unreduced_app(s)) continue;
    Term split = sum({cross(1, s.head(), {s.kid(0)}), at_zero_of(s.head())});
    return with_kids(t, replaced(t.kids(), i, std::move(split)), t.marks());
  }
  return std::nullopt;
}

// ------------------------------------------------------------------ R7

// Lin(v, body) seen as an application of an atom `head` to slots; a
// composite application (K.H)(t), K atomic, is seen as K(H(t)).
struct Spine {
  Functor head;
  bool is_cross;
  std::vector<Term> slots;
  std::vector<int> marks;
};

std::optional<Spine> spine_of(const Term& body) {
  if (body.is(Kind::Cross) && body.head().is_atom()) return Spine{body.head(), true, body.kids(), body.marks()};
  if (!body.is(Kind::Apply) || body.kids().empty()) return std::nullopt;
  if (body.head().is_atom()) return Spine{body.head(), false, body.kids(), body.marks()};
  const Functor outer = body.head().outer();
  if (!outer.is_atom()) return std::nullopt;
  return Spine{outer, false, {app(body.head().inner(), {body.kid(0)})}, {0}};
}

Term rebuild(const Spine& sp) {
  if (sp.is_cross) return cross(static_cast<int>(sp.slots.size()), sp.head, sp.slots, sp.marks);
  return app(sp.head, sp.slots, sp.marks);
}

std::optional<Term> rule_chain(const Term& t, bool correction) {
  if (!t.is(Kind::Lin)) return std::nullopt;
  const std::string& v = t.name();
  const Term& b = t.body();
  if (b.is(Kind::Var)) {
    if (!correction && b.name() == v) return b;
    return std::nullopt;
  }
  auto sp = spine_of(b);
  if (!sp) return std::nullopt;
  std::size_t slot = sp->slots.size();
  for (std::size_t i = 0; i < sp->slots.size(); ++i) {
    if (!occurs(sp->slots[i], v)) continue;
    if (slot != sp->slots.size()) return std::nullopt;  // v in two slots
    slot = i;
  }
  if (slot == sp->slots.size()) return std::nullopt;
  const Term s = sp->slots[slot];
  const bool reduced_slot = sp->marks[slot] > 0 || vanishes_at_zero(s, v);

  Spine pushed = *sp;
  pushed.slots[slot] = lin(v, s);
  pushed.marks[slot] += 1;
  if (!correction) {
    if (!reduced_slot) return std::nullopt;
    return rebuild(pushed);
  }
  if (reduced_slot || !bare_unreduced_app(s) || !vanishes_at_zero(s.kid(0), v)) return std::nullopt;
  Spine corr = *sp;
  corr.is_cross = true;
  corr.slots[slot] = cross(1, s.head(), {s.kid(0)});
  corr.slots.insert(corr.slots.begin() + static_cast<std::ptrdiff_t>(slot) + 1, at_zero_of(s.head()));
  corr.marks.insert(corr.marks.begin() + static_cast<std::ptrdiff_t>(slot) + 1, 0);
  return sum({rebuild(pushed), lin(v, rebuild(corr))});
}

// ------------------------------------------------------------------ R8

std::optional<Term> rule_cr1(const Term& t) {
  if (t.is(Kind::Cross) && t.order() == 1 && t.any_mark() && t.head().is_atom()) {
    return app(t.head(), t.kids(), t.marks());
  }
  return std::nullopt;
}

std::optional<Term> rule_double(const Term& t) {
  if (!t.is(Kind::Apply) && !t.is(Kind::Cross)) return std::nullopt;
  if (std::none_of(t.marks().begin(), t.marks().end(), [](int m) { return m > 1; })) return std::nullopt;
  std::vector<int> marks = t.marks();
  for (int& m : marks) m = std::min(m, 1);
  return with_kids(t, t.kids(), std::move(marks));
}

// ------------------------------------------------------------------ R9

std::optional<Term> rule_expand(const Term& t) {
  if (!t.is(Kind::Delta) && !t.is(Kind::Nabla)) return std::nullopt;
  if (std::any_of(t.kids().begin(), t.kids().end(), contains_derivative)) return std::nullopt;
  return expand_derivative(t);
}

void walk(const Term& t, const Term* parent, Path& path, const RuleSet& disabled, std::size_t& counter,
          std::vector<Redex>& out) {
  const std::size_t here = counter++;
  for (RuleId r : kAllRules) {
    if (disabled.count(r) > 0) continue;
    if (auto res = rewrite_at(r, t, parent)) out.push_back(Redex{r, path, std::move(*res), here});
  }
  for (std::size_t i = 0; i < t.kids().size(); ++i) {
    path.push_back(i);
    walk(t.kid(i), &t, path, disabled, counter, out);
    path.pop_back();
  }
}

}  // namespace

const std::vector<RuleInfo>& rule_catalog() { return kCatalog; }

const RuleInfo& rule_info(RuleId r) { return kCatalog.at(static_cast<std::size_t>(r)); }

std::string_view rule_name(RuleId r) { return rule_info(r).name; }

RuleId parse_rule_id(std::string_view s) {
  std::string up(s);
  for (char& c : up) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  for (const auto& info : kCatalog) {
    std::string name(info.name);
    for (char& c : name) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    if (name == up) return info.id;
  }
  throw DomainError("unknown rule '" + std::string(s) + "'");
}

int rule_priority(RuleId r) {
  switch (r) {
    case RuleId::R9: return 0;
    case RuleId::R3: return 1;
    case RuleId::R1:
    case RuleId::R2:
    case RuleId::R6: return 2;
    case RuleId::R4: return 3;
    case RuleId::R5: return 4;
    case RuleId::R7a:
    case RuleId::R7b: return 5;
    case RuleId::R8a:
    case RuleId::R8b: return 6;
  }
  return 7;
}

std::optional<Term> rewrite_at(RuleId r, const Term& t, const Term* parent) {
  switch (r) {
    case RuleId::R1: return rule_split(t);
    case RuleId::R2: return rule_zero(t);
    case RuleId::R3: return rule_composite(t, parent);
    case RuleId::R4: return rule_distribute(t);
    case RuleId::R5: return rule_contract(t);
    case RuleId::R6: return rule_unreduced(t);
    case RuleId::R7a: return rule_chain(t, false);
    case RuleId::R7b: return rule_chain(t, true);
    case RuleId::R8a: return rule_cr1(t);
    case RuleId::R8b: return rule_double(t);
    case RuleId::R9: return rule_expand(t);
  }
  return std::nullopt;
}

bool vanishes_at_zero(const Term& t, const std::string& v) {
  switch (t.kind()) {
    case Kind::Var: return t.name() == v;
    case Kind::Zero: return true;
    case Kind::Sum: return std::all_of(t.kids().begin(), t.kids().end(), [&](const Term& k) { return vanishes_at_zero(k, v); });
    case Kind::Cross: return std::any_of(t.kids().begin(), t.kids().end(), [&](const Term& k) { return vanishes_at_zero(k, v); });
    case Kind::Apply:
      if (t.kids().empty() || !t.head().is_atom()) return false;
      if (identity_head(t) || t.any_mark()) return vanishes_at_zero(t.kid(0), v);
      return false;
    case Kind::Lin: return t.name() == v || vanishes_at_zero(t.body(), v);
    case Kind::Nabla:
    case Kind::Delta: return false;
  }
  return false;
}

std::vector<Redex> find_redexes(const Term& t, const RuleSet& disabled) {
  std::vector<Redex> out;
  Path path;
  std::size_t counter = 0;
  walk(t, nullptr, path, disabled, counter, out);
  return out;
}

}  // namespace afc
