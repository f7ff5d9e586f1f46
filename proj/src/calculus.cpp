#include "afc/calculus.hpp"

#include <algorithm>
#include <map>

#include "afc/text.hpp"

namespace afc {

namespace {

const std::vector<LabelledTerm> kLhs = {
    {"A1", "D1[w] (F.G)(w)"},
    {"A2", "D1[w] cr1 F(cr2 G(w, x))"},
    {"A3", "D1[w] cr2 F(cr2 G(w, x), G0)"},
    {"A4", "D1[w] cr2 F(cr1 G(w), cr1 G(x))"},
    {"A5", "D1[w] cr2 F(cr2 G(w, x), cr1 G(x))"},
    {"A6", "D1[w] cr3 F(cr1 G(w), cr1 G(x), G0)"},
    {"A7", "D1[w] cr3 F(cr2 G(w, x), cr1 G(x), G0)"},
    {"A8", "D1[v] D1[vbar] cr1 F(cr2 G(v, vbar))"},
    {"A9", "D1[v] D1[vbar] cr2 F(cr2 G(v, vbar), G0)"},
    {"A10", "D1[v] D1[vbar] cr2 F(cr1 G(v), cr1 G(vbar))"},
    {"A11", "D1[v] D1[vbar] cr3 F(cr1 G(v), cr1 G(vbar), G0)"},
    {"A12", "D1[v] D1[vbar] cr1 F(cr3 G(v, vbar, x))"},
    {"A13", "D1[v] D1[vbar] cr2 F(cr3 G(v, vbar, x), G0)"},
    {"A14", "D1[v] D1[vbar] cr2 F(cr2 G(v, vbar), cr1 G(x))"},
    {"A15", "D1[v] D1[vbar] cr2 F(cr3 G(v, vbar, x), cr1 G(x))"},
    {"A16", "D1[v] D1[vbar] cr2 F(cr1 G(v), cr2 G(vbar, x))"},
    {"A17", "D1[v] D1[vbar] cr2 F(cr1 G(vbar), cr2 G(v, x))"},
    {"A18", "D1[v] D1[vbar] cr2 F(cr2 G(v, x), cr2 G(vbar, x))"},
    {"A19", "D1[v] D1[vbar] cr3 F(cr2 G(v, vbar), cr1 G(x), G0)"},
    {"A20", "D1[v] D1[vbar] cr3 F(cr3 G(v, vbar, x), cr1 G(x), G0)"},
    {"A21", "D1[v] D1[vbar] cr3 F(cr1 G(v), cr2 G(vbar, x), G0)"},
    {"A22", "D1[v] D1[vbar] cr3 F(cr1 G(vbar), cr2 G(v, x), G0)"},
    {"A23", "D1[v] D1[vbar] cr3 F(cr2 G(v, x), cr2 G(vbar, x), G0)"},
    {"A24", "D1[v] D1[vbar] cr3 F(cr1 G(v), cr1 G(vbar), cr1 G(x))"},
    {"A25", "D1[v] D1[vbar] cr3 F(cr1 G(v), cr2 G(vbar, x), cr1 G(x))"},
    {"A26", "D1[v] D1[vbar] cr3 F(cr1 G(vbar), cr2 G(v, x), cr1 G(x))"},
    {"A27", "D1[v] D1[vbar] cr3 F(cr2 G(v, x), cr2 G(vbar, x), cr1 G(x))"},
    {"A28", "D1[v] D1[vbar] cr4 F(cr1 G(v), cr1 G(vbar), cr1 G(x), G0)"},
    {"A29", "D1[v] D1[vbar] cr4 F(cr1 G(v), cr2 G(vbar, x), cr1 G(x), G0)"},
    {"A30", "D1[v] D1[vbar] cr4 F(cr1 G(vbar), cr2 G(v, x), cr1 G(x), G0)"},
    {"A31", "D1[v] D1[vbar] cr4 F(cr2 G(v, x), cr2 G(vbar, x), cr1 G(x), G0)"},
};

const std::vector<LabelledTerm> kRhs = {
    {"B1", "D1 F(D1 G(w))"},
    {"B8", "D1 F(D1^1 D1^2 cr2 G(v, v))"},
    {"B12", "D1 F(D1^1 D1^2 cr3 G(v, v, x))"},
    {"B2", "D1 F(D1^1 cr2 G(w, x))"},
    {"B10", "D1^1 D1^2 cr2 F(D1 G(v), D1 G(v))"},
    {"B16", "D1^1 D1^2 cr2 F(D1 G(v), D1^1 cr2 G(v, x))"},
    {"B17", "D1^1 D1^2 cr2 F(D1^1 cr2 G(v, x), D1 G(v))"},
    {"B18", "D1^1 D1^2 cr2 F(D1^1 cr2 G(v, x), D1^1 cr2 G(v, x))"},
    {"B11", "D1^1 D1^2 cr3 F(D1 G(v), D1 G(v), G0)"},
    {"B21", "D1^1 D1^2 cr3 F(D1 G(v), D1^1 cr2 G(v, x), G0)"},
    {"B22", "D1^1 D1^2 cr3 F(D1^1 cr2 G(v, x), D1 G(v), G0)"},
    {"B23", "D1^1 D1^2 cr3 F(D1^1 cr2 G(v, x), D1^1 cr2 G(v, x), G0)"},
    {"B24", "D1^1 D1^2 cr3 F(D1 G(v), D1 G(v), cr1 G(x))"},
    {"B25", "D1^1 D1^2 cr3 F(D1 G(v), D1^1 cr2 G(v, x), cr1 G(x))"},
    {"B26", "D1^1 D1^2 cr3 F(D1^1 cr2 G(v, x), D1 G(v), cr1 G(x))"},
    {"B27", "D1^1 D1^2 cr3 F(D1^1 cr2 G(v, x), D1^1 cr2 G(v, x), cr1 G(x))"},
    {"B28", "D1^1 D1^2 cr4 F(D1 G(v), D1 G(v), cr1 G(x), G0)"},
    {"B29", "D1^1 D1^2 cr4 F(D1 G(v), D1^1 cr2 G(v, x), cr1 G(x), G0)"},
    {"B30", "D1^1 D1^2 cr4 F(D1^1 cr2 G(v, x), D1 G(v), cr1 G(x), G0)"},
    {"B31", "D1^1 D1^2 cr4 F(D1^1 cr2 G(v, x), D1^1 cr2 G(v, x), cr1 G(x), G0)"},
    {"C1", "D1^1 cr2 F(D1 G(w), G0)"},
    {"B3", "D1^1 cr2 F(D1^1 cr2 G(w, x), G0)"},
    {"B9", "D1^1 cr2 F(D1^1 D1^2 cr2 G(v, v), G0)"},
    {"B13", "D1^1 cr2 F(D1^1 D1^2 cr3 G(v, v, x), G0)"},
    {"B4", "D1^1 cr2 F(D1 G(w), cr1 G(x))"},
    {"B5", "D1^1 cr2 F(D1^1 cr2 G(w, x), cr1 G(x))"},
    {"B14", "D1^1 cr2 F(D1^1 D1^2 cr2 G(v, v), cr1 G(x))"},
    {"B15", "D1^1 cr2 F(D1^1 D1^2 cr3 G(v, v, x), cr1 G(x))"},
    {"B6", "D1^1 cr3 F(D1 G(w), cr1 G(x), G0)"},
    {"B7", "D1^1 cr3 F(D1^1 cr2 G(w, x), cr1 G(x), G0)"},
    {"B19", "D1^1 cr3 F(D1^1 D1^2 cr2 G(v, v), cr1 G(x), G0)"},
    {"B20", "D1^1 cr3 F(D1^1 D1^2 cr3 G(v, v, x), cr1 G(x), G0)"},
};

void check_order(int order) {
  if (order != 1 && order != 2) throw DomainError("chain rules are available for orders 1 and 2, got " + std::to_string(order));
}

Functor rename_functor(const Functor& f, const std::map<std::string, std::string>& m) {
  if (!f.is_atom()) return Functor::compose(rename_functor(f.outer(), m), rename_functor(f.inner(), m));
  FunctorAtom a = f.atom();
  if (auto it = m.find(a.name); it != m.end()) a.name = it->second;
  return Functor(a);
}

std::set<std::string> lin_binders(const Term& t) {
  std::set<std::string> out;
  const Term* cur = &t;
  while (cur->is(Kind::Lin)) {
    out.insert(cur->name());
    cur = &cur->body();
  }
  return out;
}

AliasMap bar_aliases() { return AliasMap{{bar("v"), "v"}}; }

Term collapsed(const Term& t) { return collapse_aliases(t, bar_aliases(), VarContext{}); }

std::vector<Term> collapsed_sorted(const std::vector<Term>& atoms) {
  std::vector<Term> out;
  for (const auto& a : atoms) {
    for (const auto& s : summands(collapsed(a))) out.push_back(s);
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::map<std::string, std::string> functor_names(const Functor& f, const Functor& g) {
  std::map<std::string, std::string> m;
  if (f.is_atom()) m["F"] = f.atom().name;
  if (g.is_atom()) m["G"] = g.atom().name;
  return m;
}

std::vector<std::pair<std::string, Term>> parsed_catalog(const std::vector<LabelledTerm>& cat, const Functor& f,
                                                         const Functor& g, bool collapse) {
  const auto names = functor_names(f, g);
  std::vector<std::pair<std::string, Term>> out;
  for (const auto& e : cat) {
    Term t = canonicalize(rename_functors(parse_term(e.text), names));
    out.emplace_back(e.label, collapse ? collapsed(t) : t);
  }
  return out;
}

int label_number(const std::string& label) { return std::stoi(label.substr(1)); }

}  // namespace

Term nabla_expansion(const Functor& f, const Term& v, const Term& x) { return delta_expansion(1, f, {v}, x); }

Term delta_expansion(int order, const Functor& f, const std::vector<Term>& dirs, const Term& x) {
  if (order < 0 || order > 2) throw DomainError("directional derivatives of order " + std::to_string(order) + " are not supported");
  if (static_cast<int>(dirs.size()) != order) throw StructuralError("direction count differs from the order");
  if (order == 0) return app(f, {x});
  const Term& first = dirs[0];
  const Term& v = dirs.back();
  const Term vb = v.is(Kind::Var) ? var(bar(v.name())) : v;
  if (f.is_atom()) {
    std::vector<Term> out = {app(f, {first}, {1}), cross(2, f, {first, x}, {1, 0})};
    if (order == 2) {
      out.push_back(cross(2, f, {v, vb}, {1, 1}));
      out.push_back(cross(3, f, {v, vb, x}, {1, 1, 0}));
    }
    return sum(std::move(out));
  }
  for (const auto& d : dirs) {
    if (!d.is(Kind::Var)) throw DomainError("a composite functor needs variable directions");
  }
  const std::string u = first.name();
  std::vector<Term> out = {lin(u, app(f, {first})), lin(u, cross(2, f, {first, x}))};
  if (order == 2) {
    out.push_back(lin(v.name(), lin(vb.name(), cross(2, f, {v, vb}))));
    out.push_back(lin(v.name(), lin(vb.name(), cross(3, f, {v, vb, x}))));
  }
  return sum(std::move(out));
}

std::optional<Term> expand_derivative(const Term& t) {
  std::vector<Term> dirs;
  Term base = zero();
  int order = 0;
  if (t.is(Kind::Nabla)) {
    dirs = {t.kid(0)};
    base = t.kid(1);
    order = 1;
  } else if (t.is(Kind::Delta)) {
    dirs.assign(t.kids().begin(), t.kids().end() - 1);
    base = t.kids().back();
    order = t.order();
  } else {
    return std::nullopt;
  }
  if (!t.head().is_atom() &&
      std::any_of(dirs.begin(), dirs.end(), [](const Term& d) { return !d.is(Kind::Var); })) {
    return std::nullopt;
  }
  return delta_expansion(order, t.head(), dirs, base);
}

Term chain_rule_lhs(int order, const Functor& f, const Functor& g) {
  check_order(order);
  std::vector<Term> dirs = order == 2 ? std::vector<Term>{var("w"), var("v")} : std::vector<Term>{var("v")};
  return delta(order, Functor::compose(f, g), std::move(dirs), var("x"));
}

Term chain_rule_rhs(int order, const Functor& f, const Functor& g) {
  check_order(order);
  const Term x = var("x");
  const Term gx = app(g, {x});
  if (order == 1) return delta(1, f, {delta(1, g, {var("v")}, x)}, gx);
  return delta(2, f, {delta(2, g, {var("w"), var("v")}, x), delta(1, g, {var("v")}, x)}, gx);
}

Sides expand_sides(int order, const Functor& f, const Functor& g, const NormalizeOptions& opts) {
  return Sides{normalize(chain_rule_lhs(order, f, g), opts), normalize(chain_rule_rhs(order, f, g), opts)};
}

std::vector<Term> lhs_presplit(int order, const Functor& f, const Functor& g, const NormalizeOptions& opts) {
  NormalizeOptions o = opts;
  for (RuleId r : {RuleId::R7a, RuleId::R7b, RuleId::R8a, RuleId::R8b}) o.disabled.insert(r);
  o.record_trace = false;
  return normalize(chain_rule_lhs(order, f, g), o).atoms;
}

std::array<int, 5> VerificationReport::group_sizes() const {
  std::array<int, 5> out{};
  for (const auto& p : pairing) ++out[static_cast<std::size_t>(p.type) - 1];
  return out;
}

VerificationReport verify_chain_rule(int order, const Functor& f, const Functor& g, const NormalizeOptions& opts) {
  VerificationReport rep;
  rep.order = order;
  auto sides = expand_sides(order, f, g, opts);
  rep.lhs = std::move(sides.lhs);
  rep.rhs = std::move(sides.rhs);
  const auto l = collapsed_sorted(rep.lhs.atoms);
  const auto r = collapsed_sorted(rep.rhs.atoms);
  rep.equal = l == r;
  std::set_difference(l.begin(), l.end(), r.begin(), r.end(), std::back_inserter(rep.only_lhs));
  std::set_difference(r.begin(), r.end(), l.begin(), l.end(), std::back_inserter(rep.only_rhs));
  if (order != 2 || !f.is_atom() || !g.is_atom()) return rep;

  const auto a_cat = parsed_catalog(kLhs, f, g, false);
  const auto b_cat = parsed_catalog(kRhs, f, g, true);
  std::vector<bool> used(b_cat.size(), false);
  NormalizeOptions local = opts;
  local.record_trace = true;
  for (const Term& p : lhs_presplit(order, f, g, opts)) {
    PairingEntry e;
    e.lhs_summand = p;
    e.lhs_label = "?";
    for (const auto& [label, term] : a_cat) {
      if (term == p) e.lhs_label = label;
    }
    NormalForm nf = normalize(p, local);
    e.lhs_atoms = nf.atoms;
    bool chain_correction = false;
    bool cr1_collapse = false;
    for (const auto& st : nf.trace) {
      chain_correction = chain_correction || st.rule == RuleId::R7b;
      cr1_collapse = cr1_collapse || st.rule == RuleId::R8a;
    }
    if (chain_correction) {
      e.type = ProofType::Type3;
    } else if (lin_binders(p).size() <= 1) {
      e.type = cr1_collapse ? ProofType::Type2 : ProofType::Type1;
    } else {
      e.type = cr1_collapse ? ProofType::Type5 : ProofType::Type4;
    }
    for (const auto& atom : collapsed_sorted(nf.atoms)) {
      std::string label = "?";
      for (std::size_t i = 0; i < b_cat.size(); ++i) {
        if (!used[i] && b_cat[i].second == atom) {
          used[i] = true;
          label = b_cat[i].first;
          break;
        }
      }
      e.rhs_labels.push_back(label);
    }
    rep.pairing.push_back(std::move(e));
  }
  std::stable_sort(rep.pairing.begin(), rep.pairing.end(), [](const PairingEntry& a, const PairingEntry& b) {
    const bool ka = a.lhs_label != "?";
    const bool kb = b.lhs_label != "?";
    if (ka != kb) return ka;
    return ka && label_number(a.lhs_label) < label_number(b.lhs_label);
  });
  return rep;
}

const std::vector<LabelledTerm>& lhs_catalog() { return kLhs; }
const std::vector<LabelledTerm>& rhs_catalog() { return kRhs; }

Term rename_functors(const Term& t, const std::map<std::string, std::string>& m) {
  std::vector<Term> kids;
  for (const auto& k : t.kids()) kids.push_back(rename_functors(k, m));
  switch (t.kind()) {
    case Kind::Apply: return app(rename_functor(t.head(), m), std::move(kids), t.marks());
    case Kind::Cross: return cross(t.order(), rename_functor(t.head(), m), std::move(kids), t.marks());
    case Kind::Nabla: return nabla(rename_functor(t.head(), m), kids.at(0), kids.at(1));
    case Kind::Delta: {
      Term base = kids.back();
      kids.pop_back();
      return delta(t.order(), rename_functor(t.head(), m), std::move(kids), std::move(base));
    }
    default: return with_kids(t, std::move(kids));
  }
}

nlohmann::json to_json(const NormalForm& nf, bool with_trace) {
  nlohmann::json j;
  j["atoms"] = nlohmann::json::array();
  for (const auto& a : nf.atoms) j["atoms"].push_back(to_json(a));
  j["atoms_text"] = nlohmann::json::array();
  for (const auto& a : nf.atoms) j["atoms_text"].push_back(to_text(a));
  if (with_trace) {
    j["trace"] = nlohmann::json::array();
    for (const auto& st : nf.trace) {
      j["trace"].push_back({{"rule", std::string(rule_name(st.rule))},
                            {"citation", st.citation},
                            {"path", st.path},
                            {"before", to_json(st.before)},
                            {"after", to_json(st.after)}});
    }
  }
  return j;
}

nlohmann::json to_json(const VerificationReport& r, bool with_trace) {
  nlohmann::json j;
  j["order"] = r.order;
  j["verdict"] = r.equal ? "equal" : "mismatch";
  j["lhs"] = to_json(r.lhs, with_trace);
  j["rhs"] = to_json(r.rhs, with_trace);
  j["diff"] = {{"only_lhs", nlohmann::json::array()}, {"only_rhs", nlohmann::json::array()}};
  for (const auto& t : r.only_lhs) j["diff"]["only_lhs"].push_back(to_text(t));
  for (const auto& t : r.only_rhs) j["diff"]["only_rhs"].push_back(to_text(t));
  j["pairing"] = nlohmann::json::array();
  for (const auto& p : r.pairing) {
    nlohmann::json atoms = nlohmann::json::array();
    for (const auto& a : p.lhs_atoms) atoms.push_back(to_text(a));
    j["pairing"].push_back({{"lhs", p.lhs_label},
                            {"lhs_term", to_text(p.lhs_summand)},
                            {"lhs_atoms", atoms},
                            {"rhs", p.rhs_labels},
                            {"type", "Type" + std::to_string(static_cast<int>(p.type))}});
  }
  if (!r.pairing.empty()) j["group_sizes"] = r.group_sizes();
  return j;
}

}  // namespace afc
