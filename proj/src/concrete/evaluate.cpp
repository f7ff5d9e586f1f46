#include "afc/concrete/evaluate.hpp"

#include <algorithm>

#include "afc/text.hpp"

namespace afc::concrete {

std::size_t Assignment::dim_of(const std::string& var) const {
  auto it = dims.find(var);
  return it == dims.end() ? default_dim : it->second;
}

FunctorPtr Assignment::functor(const std::string& name) const {
  auto it = functors.find(name);
  if (it == functors.end()) throw ContextError("no concrete functor assigned to '" + name + "'");
  return it->second;
}

namespace {

bool contains(const Term& t, bool (*pred)(const Term&)) {
  if (pred(t)) return true;
  return std::any_of(t.kids().begin(), t.kids().end(), [&](const Term& k) { return contains(k, pred); });
}

bool is_derivative(const Term& t) { return t.is(Kind::Delta) || t.is(Kind::Nabla); }
bool is_linear_part(const Term& t) { return t.is(Kind::Lin) || t.any_mark(); }

bool plain(const Term& t) { return !contains(t, is_derivative) && !contains(t, is_linear_part); }

FunctorPtr head_functor(const Functor& h, const Assignment& a) {
  if (!h.is_atom()) return compose(head_functor(h.outer(), a), head_functor(h.inner(), a));
  const FunctorAtom& atom = h.atom();
  if (atom.is_identity()) return identity();
  if (atom.is_constant()) throw UnsupportedShape("constant functor in head position");
  FunctorPtr f = a.functor(atom.name);
  if (atom.reduced && f->dim1(0) != 0) {
    throw DomainError("'" + atom.name + "' is declared reduced but its concrete value at 0 is nonzero");
  }
  return f;
}

class Realizer {
 public:
  Realizer(const Assignment& a, std::vector<std::string> vars) : a_(a), vars_(std::move(vars)) {}

  const std::vector<std::string>& vars() const { return vars_; }
  Dims dims() const {
    Dims d;
    for (const auto& v : vars_) d.push_back(a_.dim_of(v));
    return d;
  }

  FunctorPtr operator()(const Term& t) const {
    const int m = static_cast<int>(vars_.size());
    switch (t.kind()) {
      case Kind::Var: {
        auto it = std::find(vars_.begin(), vars_.end(), t.name());
        if (it == vars_.end()) throw ContextError("variable '" + t.name() + "' has no slot");
        return projection(m, static_cast<int>(it - vars_.begin()));
      }
      case Kind::Zero: return constant(0, m);
      case Kind::Sum: {
        FunctorPtr f = (*this)(t.kid(0));
        for (std::size_t i = 1; i < t.kids().size(); ++i) f = oplus(f, (*this)(t.kid(i)));
        return f;
      }
      case Kind::Apply: {
        if (t.head().is_atom() && t.head().atom().is_constant()) {
          return constant(a_.functor(t.head().atom().name)->dim1(0), m);
        }
        return compose(head_functor(t.head(), a_), (*this)(t.kid(0)));
      }
      case Kind::Cross: {
        std::vector<FunctorPtr> args;
        for (const auto& k : t.kids()) args.push_back((*this)(k));
        return compose(cross_effect(head_functor(t.head(), a_), t.order()), std::move(args));
      }
      default: throw UnsupportedShape("cannot realize " + std::string(kind_name(t.kind())) + " as a functor");
    }
  }

 private:
  const Assignment& a_;
  std::vector<std::string> vars_;
};

std::size_t plain_dim(const Term& t, const Assignment& a) {
  auto fv = free_vars(t);
  Realizer r(a, std::vector<std::string>(fv.begin(), fv.end()));
  return r(t)->dim(r.dims());
}

ChainComplex evaluate_lin(const Term& s, const Assignment& a) {
  std::vector<std::string> binders;
  const Term* body = &s;
  while (body->is(Kind::Lin)) {
    if (std::count(binders.begin(), binders.end(), body->name()) > 0) {
      throw UnsupportedShape("repeated linearization variable '" + body->name() + "'");
    }
    binders.push_back(body->name());
    body = &body->body();
  }
  if (!plain(*body)) throw UnsupportedShape("D1 over a body that is itself linearized or differentiated");
  std::vector<std::string> vars = binders;
  for (const auto& v : free_vars(*body)) {
    if (std::find(vars.begin(), vars.end(), v) == vars.end()) vars.push_back(v);
  }
  Realizer r(a, vars);
  std::vector<int> slots(binders.size());
  for (std::size_t i = 0; i < slots.size(); ++i) slots[i] = static_cast<int>(i);
  return multilinearization_complex(r(*body), r.dims(), slots, a.top);
}

ChainComplex evaluate_marked(const Term& s, const Assignment& a) {
  if (!s.head().is_atom()) throw UnsupportedShape("marks on a composite head");
  std::vector<int> slots;
  Dims dims;
  for (std::size_t i = 0; i < s.kids().size(); ++i) {
    if (!plain(s.kid(i))) throw UnsupportedShape("D1 nested inside an argument of a linearized slot");
    const int mk = i < s.marks().size() ? s.marks()[i] : 0;
    if (mk > 1) throw UnsupportedShape("repeated D1 on one slot");
    if (mk == 1) slots.push_back(static_cast<int>(i));
    dims.push_back(plain_dim(s.kid(i), a));
  }
  FunctorPtr f = head_functor(s.head(), a);
  FunctorPtr h = s.is(Kind::Cross) ? cross_effect(f, s.order()) : f;
  return multilinearization_complex(h, dims, slots, a.top);
}

ChainComplex evaluate_summand(const Term& s, const Assignment& a) {
  if (s.is_zero()) return zero_complex(a.top);
  if (contains(s, is_derivative)) throw UnsupportedShape("derivative nodes must be expanded first");
  if (s.is(Kind::Lin)) return evaluate_lin(s, a);
  if ((s.is(Kind::Apply) || s.is(Kind::Cross)) && s.any_mark()) return evaluate_marked(s, a);
  if (plain(s)) return concentrated(plain_dim(s, a), a.top);
  throw UnsupportedShape("linear parts nested below the top of a summand");
}

}  // namespace

ChainComplex evaluate(const Term& t, const Assignment& a) {
  if (a.top < 1) throw DomainError("truncation degree must be >= 1");
  ChainComplex out = zero_complex(a.top);
  for (const auto& s : summands(canonicalize(t))) out = oplus(out, evaluate_summand(s, a));
  return out;
}

std::vector<std::size_t> homology(const Term& t, const Assignment& a) { return evaluate(t, a).homology(); }

namespace {

struct Instance {
  RuleId rule;
  const char* lhs;
  std::map<std::string, std::string> functors;
  std::size_t dim;
  const char* description;
};

const std::vector<Instance>& instances() {
  static const std::vector<Instance> table = {
      {RuleId::R1, "cr2 F(x + v, w)", {{"F", "T3"}}, 1, "sum in a slot of cr2 T3"},
      {RuleId::R2, "cr2 F(x, 0)", {{"F", "T2"}}, 2, "zero in a slot of cr2 T2"},
      {RuleId::R3, "cr2 (F.G)(x, w)", {{"F", "T2"}, {"G", "T2+C1"}}, 1, "cover expansion of cr2 (T2 . (T2 + C1))"},
      {RuleId::R4, "D1[x] (F(x) + G(x))", {{"F", "T2+Id"}, {"G", "Id"}}, 2, "D1 of a sum"},
      {RuleId::R5,
       "D1[x] cr2 F(cr1 G(x), cr2 G(w, x))",
       {{"F", "T2"}, {"G", "T2"}},
       1,
       "contractible D1 with x in two cross-effect slots"},
      {RuleId::R6, "cr2 F(w, G(x))", {{"F", "T2"}, {"G", "T2+C1"}}, 1, "unreduced application in a slot"},
      {RuleId::R7a,
       "D1[w] cr2 F(cr2 G(w, x), G0)",
       {{"F", "T2"}, {"G", "T2+C1"}},
       1,
       "chain rule through one slot"},
      {RuleId::R7b, "D1[w] (F.G)(w)", {{"F", "T2"}, {"G", "T2"}}, 1, "chain rule through a composite head"},
      {RuleId::R8a, "D1 cr1 F(x)", {{"F", "T2+Id"}}, 2, "D1 cr1 F = D1 F for F = T2 + Id"},
      {RuleId::R8b, "D1 D1 F(x)", {{"F", "T2+Id"}}, 2, "repeated D1"},
      {RuleId::R9, "Nabla F(v; x)", {{"F", "T2"}}, 1, "directional derivative"},
  };
  return table;
}

}  // namespace

ConcreteCheck check_rule_concrete(RuleId r, const CheckOverrides& o) {
  const auto& table = instances();
  auto it = std::find_if(table.begin(), table.end(), [&](const Instance& i) { return i.rule == r; });
  if (it == table.end()) throw DomainError("no concrete instance for rule " + std::string(rule_name(r)));

  ConcreteCheck c{r, it->description, canonicalize(parse_term(it->lhs)), zero(), it->functors, it->dim, 2, false, {}, {}, {}};
  for (const auto& [k, v] : o.functors) c.functors[k] = v;
  if (o.dim) c.dim = *o.dim;
  if (o.top) c.top = *o.top;

  Assignment a;
  for (const auto& [k, v] : c.functors) a.functors[k] = parse_functor_spec(v);
  a.default_dim = c.dim;
  a.top = c.top;

  auto rhs = rewrite_at(r, c.lhs, nullptr);
  if (!rhs) {
    c.reason = "rule does not fire on its built-in instance";
    return c;
  }
  c.rhs = canonicalize(*rhs);
  try {
    c.lhs_homology = homology(c.lhs, a);
    c.rhs_homology = homology(c.rhs, a);
    c.supported = true;
  } catch (const UnsupportedShape& e) {
    c.reason = e.what();
    c.lhs_homology.clear();
    c.rhs_homology.clear();
  }
  return c;
}

nlohmann::json to_json(const ConcreteCheck& c) {
  nlohmann::json j;
  j["rule"] = std::string(rule_name(c.rule));
  j["description"] = c.description;
  j["lhs"] = to_text(c.lhs);
  j["rhs"] = to_text(c.rhs);
  j["functors"] = c.functors;
  j["dim"] = c.dim;
  j["truncate"] = c.top;
  j["supported"] = c.supported;
  if (!c.supported) {
    j["reason"] = c.reason;
    return j;
  }
  j["lhs_homology"] = c.lhs_homology;
  j["rhs_homology"] = c.rhs_homology;
  nlohmann::json per = nlohmann::json::array();
  for (std::size_t k = 0; k < c.lhs_homology.size(); ++k) per.push_back(c.lhs_homology[k] == c.rhs_homology.at(k));
  j["degree_agrees"] = per;
  j["agree"] = c.agree();
  return j;
}

}  // namespace afc::concrete
