#include "afc/term.hpp"

#include <algorithm>
#include <utility>

namespace afc {

// ---------------------------------------------------------------- atoms

FunctorAtom FunctorAtom::abstract(std::string name) {
  return FunctorAtom{std::move(name), 1, false, AtomRole::Abstract};
}

FunctorAtom FunctorAtom::identity() { return FunctorAtom{"Id", 1, true, AtomRole::Identity}; }

FunctorAtom FunctorAtom::at_zero(std::string base) {
  return FunctorAtom{std::move(base), 0, false, AtomRole::ConstantAtZero};
}

std::strong_ordering operator<=>(const FunctorAtom& a, const FunctorAtom& b) {
  if (auto c = a.role <=> b.role; c != 0) return c;
  if (auto c = a.name <=> b.name; c != 0) return c;
  if (auto c = a.arity <=> b.arity; c != 0) return c;
  return a.reduced <=> b.reduced;
}

Functor::Functor(FunctorAtom atom)
    : node_(std::make_shared<const Node>(Node{std::move(atom), nullptr, nullptr})) {}

Functor Functor::compose(const Functor& outer, const Functor& inner) {
  for (const Functor* f : {&outer, &inner}) {
    for (const auto& a : f->chain()) {
      if (a.arity != 1) throw StructuralError("composite of a non-unary functor '" + a.name + "'");
    }
  }
  if (!inner.is_atom()) return compose(compose(outer, inner.outer()), inner.inner());
  return Functor(std::make_shared<const Node>(Node{FunctorAtom{}, outer.node_, inner.node_}));
}

const FunctorAtom& Functor::atom() const {
  if (!is_atom()) throw StructuralError("atom() on a composite functor");
  return node_->atom;
}

Functor Functor::outer() const {
  if (is_atom()) throw StructuralError("outer() on an atom");
  return Functor(node_->outer);
}

Functor Functor::inner() const {
  if (is_atom()) throw StructuralError("inner() on an atom");
  return Functor(node_->inner);
}

int Functor::compose_count() const { return is_atom() ? 0 : 1 + outer().compose_count() + inner().compose_count(); }

std::vector<FunctorAtom> Functor::chain() const {
  if (is_atom()) return {node_->atom};
  auto out = outer().chain();
  auto in = inner().chain();
  out.insert(out.end(), in.begin(), in.end());
  return out;
}

std::strong_ordering operator<=>(const Functor& a, const Functor& b) {
  if (a.node_ == b.node_) return std::strong_ordering::equal;
  if (a.is_atom() != b.is_atom()) return a.is_atom() ? std::strong_ordering::less : std::strong_ordering::greater;
  if (a.is_atom()) return a.atom() <=> b.atom();
  if (auto c = a.outer() <=> b.outer(); c != 0) return c;
  return a.inner() <=> b.inner();
}

// ---------------------------------------------------------------- terms

std::string_view kind_name(Kind k) {
  switch (k) {
    case Kind::Var: return "var";
    case Kind::Zero: return "zero";
    case Kind::Sum: return "sum";
    case Kind::Apply: return "apply";
    case Kind::Cross: return "cross";
    case Kind::Lin: return "lin";
    case Kind::Nabla: return "nabla";
    case Kind::Delta: return "delta";
  }
  return "?";
}

Term make_node(Kind k, std::string name, const Functor* head, int order, std::vector<Term> kids,
               std::vector<int> marks) {
  auto n = std::make_shared<Term::Node>();
  n->kind = k;
  n->name = std::move(name);
  if (head != nullptr) n->head = std::make_shared<const Functor>(*head);
  n->order = order;
  n->kids = std::move(kids);
  n->marks = std::move(marks);
  return Term(std::move(n));
}

Term::Term() : Term(zero()) {}

const Functor& Term::head() const {
  if (!node_->head) throw StructuralError(std::string("head() on a ") + std::string(kind_name(kind())) + " node");
  return *node_->head;
}

bool Term::any_mark() const {
  return std::any_of(node_->marks.begin(), node_->marks.end(), [](int m) { return m > 0; });
}

bool Term::atom_headed() const { return (is(Kind::Apply) || is(Kind::Cross)) && head().is_atom(); }

std::size_t Term::size() const {
  std::size_t s = 1;
  for (const auto& k : kids()) s += k.size();
  return s;
}

namespace {

int sort_class(const Term& t) {
  switch (t.kind()) {
    case Kind::Var: return 0;
    case Kind::Apply: return t.head().is_atom() && t.head().atom().is_constant() ? 7 : 1;
    case Kind::Cross: return 2;
    case Kind::Lin: return 3;
    case Kind::Sum: return 4;
    case Kind::Nabla: return 5;
    case Kind::Delta: return 6;
    case Kind::Zero: return 8;
  }
  return 9;
}

std::strong_ordering compare_kids(const std::vector<Term>& a, const std::vector<Term>& b) {
  const std::size_t n = std::min(a.size(), b.size());
  for (std::size_t i = 0; i < n; ++i) {
    if (auto c = a[i] <=> b[i]; c != 0) return c;
  }
  return a.size() <=> b.size();
}

}  // namespace

std::strong_ordering operator<=>(const Term& a, const Term& b) {
  if (a.node_ == b.node_) return std::strong_ordering::equal;
  if (auto c = sort_class(a) <=> sort_class(b); c != 0) return c;
  switch (a.kind()) {
    case Kind::Zero: return std::strong_ordering::equal;
    case Kind::Var: return a.name() <=> b.name();
    case Kind::Lin:
      if (auto c = a.name() <=> b.name(); c != 0) return c;
      return a.body() <=> b.body();
    case Kind::Sum: return compare_kids(a.kids(), b.kids());
    case Kind::Apply:
    case Kind::Cross:
    case Kind::Nabla:
    case Kind::Delta:
      if (auto c = a.order() <=> b.order(); c != 0) return c;
      if (auto c = a.head() <=> b.head(); c != 0) return c;
      if (auto c = compare_kids(a.kids(), b.kids()); c != 0) return c;
      return a.marks() <=> b.marks();
  }
  return std::strong_ordering::equal;
}

bool operator==(const Term& a, const Term& b) { return (a <=> b) == 0; }

// ---------------------------------------------------------------- builders

Term var(std::string name) {
  if (name.empty()) throw StructuralError("empty variable name");
  return make_node(Kind::Var, std::move(name), nullptr, 0, {}, {});
}

Term zero() {
  static const Term z = make_node(Kind::Zero, "", nullptr, 0, {}, {});
  return z;
}

Term sum(std::vector<Term> summands) { return make_node(Kind::Sum, "", nullptr, 0, std::move(summands), {}); }

Term operator+(const Term& a, const Term& b) { return sum({a, b}); }

namespace {

std::vector<int> checked_marks(std::vector<int> marks, std::size_t n) {
  if (marks.empty()) return std::vector<int>(n, 0);
  if (marks.size() != n) throw StructuralError("mark vector length differs from the number of slots");
  for (int m : marks) {
    if (m < 0) throw StructuralError("negative linearization mark");
  }
  return marks;
}

}  // namespace

Term app(const Functor& head, std::vector<Term> args, std::vector<int> marks) {
  if (head.is_atom()) {
    if (static_cast<int>(args.size()) != head.atom().arity) {
      throw StructuralError("functor '" + head.atom().name + "' expects " + std::to_string(head.atom().arity) +
                            " argument(s), got " + std::to_string(args.size()));
    }
  } else if (args.size() != 1) {
    throw StructuralError("composite functor expects exactly one argument");
  }
  marks = checked_marks(std::move(marks), args.size());
  if (!head.is_atom() && marks[0] != 0) throw StructuralError("slot linearization on a composite head");
  return make_node(Kind::Apply, "", &head, 0, std::move(args), std::move(marks));
}

Term cross(int n, const Functor& head, std::vector<Term> args, std::vector<int> marks) {
  if (n < 1) throw StructuralError("cross effect order must be positive");
  if (static_cast<int>(args.size()) != n) {
    throw StructuralError("cr" + std::to_string(n) + " expects " + std::to_string(n) + " argument(s), got " +
                          std::to_string(args.size()));
  }
  for (const auto& a : head.chain()) {
    if (a.arity != 1) throw StructuralError("cross effect of non-unary functor '" + a.name + "'");
  }
  marks = checked_marks(std::move(marks), args.size());
  if (!head.is_atom() && std::any_of(marks.begin(), marks.end(), [](int m) { return m > 0; })) {
    throw StructuralError("slot linearization on a composite head");
  }
  return make_node(Kind::Cross, "", &head, n, std::move(args), std::move(marks));
}

Term lin(std::string v, Term body) {
  if (v.empty()) throw StructuralError("empty linearization variable");
  return make_node(Kind::Lin, std::move(v), nullptr, 0, {std::move(body)}, {});
}

Term nabla(const Functor& head, Term direction, Term basepoint) {
  return make_node(Kind::Nabla, "", &head, 1, {std::move(direction), std::move(basepoint)}, {});
}

Term delta(int order, const Functor& head, std::vector<Term> directions, Term basepoint) {
  if (order < 0) throw StructuralError("negative directional-derivative order");
  if (order > 2) throw DomainError("directional derivatives above order 2 are not supported");
  if (static_cast<int>(directions.size()) != order) {
    throw StructuralError("Delta" + std::to_string(order) + " expects " + std::to_string(order) +
                          " direction(s), got " + std::to_string(directions.size()));
  }
  directions.push_back(std::move(basepoint));
  return make_node(Kind::Delta, "", &head, order, std::move(directions), {});
}

Term with_kids(const Term& t, std::vector<Term> kids) {
  switch (t.kind()) {
    case Kind::Var:
    case Kind::Zero: return t;
    case Kind::Sum: return sum(std::move(kids));
    case Kind::Lin: return lin(t.name(), kids.at(0));
    case Kind::Apply:
    case Kind::Cross: return with_kids(t, std::move(kids), t.marks());
    case Kind::Nabla: return nabla(t.head(), kids.at(0), kids.at(1));
    case Kind::Delta: {
      Term base = kids.back();
      kids.pop_back();
      return delta(t.order(), t.head(), std::move(kids), std::move(base));
    }
  }
  return t;
}

Term with_kids(const Term& t, std::vector<Term> kids, std::vector<int> marks) {
  if (t.is(Kind::Apply)) return app(t.head(), std::move(kids), std::move(marks));
  if (t.is(Kind::Cross)) {
    const int n = static_cast<int>(kids.size());
    return cross(n, t.head(), std::move(kids), std::move(marks));
  }
  return with_kids(t, std::move(kids));
}

// ---------------------------------------------------------------- canonical form

Term canonicalize(const Term& t) {
  switch (t.kind()) {
    case Kind::Var:
    case Kind::Zero: return t;
    case Kind::Sum: {
      std::vector<Term> flat;
      for (const auto& k : t.kids()) {
        Term c = canonicalize(k);
        if (c.is_zero()) continue;
        if (c.is(Kind::Sum)) {
          flat.insert(flat.end(), c.kids().begin(), c.kids().end());
        } else {
          flat.push_back(std::move(c));
        }
      }
      if (flat.empty()) return zero();
      if (flat.size() == 1) return flat.front();
      std::sort(flat.begin(), flat.end());
      return sum(std::move(flat));
    }
    case Kind::Apply: {
      std::vector<Term> args;
      for (const auto& k : t.kids()) args.push_back(canonicalize(k));
      const Functor& h = t.head();
      if (h.is_atom() && h.atom().role == AtomRole::Abstract && args.size() == 1 && args[0].is_zero() &&
          !t.any_mark()) {
        return app(FunctorAtom::at_zero(h.atom().name), {});
      }
      return app(h, std::move(args), t.marks());
    }
    case Kind::Cross: {
      std::vector<std::pair<Term, int>> slots;
      for (std::size_t i = 0; i < t.kids().size(); ++i) slots.emplace_back(canonicalize(t.kid(i)), t.marks()[i]);
      std::sort(slots.begin(), slots.end(), [](const auto& a, const auto& b) {
        if (auto c = a.first <=> b.first; c != 0) return c < 0;
        return a.second < b.second;
      });
      std::vector<Term> args;
      std::vector<int> marks;
      for (auto& [a, m] : slots) {
        args.push_back(std::move(a));
        marks.push_back(m);
      }
      return cross(t.order(), t.head(), std::move(args), std::move(marks));
    }
    case Kind::Lin: return lin(t.name(), canonicalize(t.body()));
    case Kind::Nabla:
    case Kind::Delta: {
      std::vector<Term> kids;
      for (const auto& k : t.kids()) kids.push_back(canonicalize(k));
      return with_kids(t, std::move(kids));
    }
  }
  return t;
}

// ---------------------------------------------------------------- variables

namespace {

void collect_vars(const Term& t, std::set<std::string>& out) {
  if (t.is(Kind::Var) || t.is(Kind::Lin)) out.insert(t.name());
  for (const auto& k : t.kids()) collect_vars(k, out);
}

}  // namespace

std::set<std::string> free_vars(const Term& t) {
  std::set<std::string> out;
  collect_vars(t, out);
  return out;
}

bool occurs(const Term& t, const std::string& v) {
  if ((t.is(Kind::Var) || t.is(Kind::Lin)) && t.name() == v) return true;
  return std::any_of(t.kids().begin(), t.kids().end(), [&](const Term& k) { return occurs(k, v); });
}

Term rename_vars(const Term& t, const std::map<std::string, std::string>& renaming) {
  auto renamed = [&](const std::string& n) {
    auto it = renaming.find(n);
    return it == renaming.end() ? n : it->second;
  };
  if (t.is(Kind::Var)) return var(renamed(t.name()));
  std::vector<Term> kids;
  kids.reserve(t.kids().size());
  for (const auto& k : t.kids()) kids.push_back(rename_vars(k, renaming));
  if (t.is(Kind::Lin)) return lin(renamed(t.name()), kids.at(0));
  return with_kids(t, std::move(kids));
}

VarContext VarContext::standard() { return VarContext{{"x", "v", "w", "vbar"}}; }

Term collapse_aliases(const Term& t, const AliasMap& aliases, const VarContext& ctx) {
  std::map<std::string, std::string> resolved;
  for (const auto& [from, to] : aliases) {
    if (!ctx.declares(from)) throw ContextError("alias source '" + from + "' is not a declared variable");
    if (!ctx.declares(to)) throw ContextError("alias target '" + to + "' is not a declared variable");
    std::string cur = to;
    std::set<std::string> seen{from};
    while (true) {
      if (!seen.insert(cur).second) throw ContextError("cyclic alias map through '" + from + "'");
      auto it = aliases.find(cur);
      if (it == aliases.end()) break;
      cur = it->second;
    }
    resolved[from] = cur;
  }
  for (const auto& n : free_vars(t)) {
    if (!ctx.declares(n)) throw ContextError("undeclared variable '" + n + "'");
  }
  return canonicalize(rename_vars(t, resolved));
}

std::string bar(const std::string& v) { return v + "bar"; }

// ---------------------------------------------------------------- paths

const Term& subterm(const Term& t, const Path& p) {
  const Term* cur = &t;
  for (std::size_t i : p) cur = &cur->kid(i);
  return *cur;
}

namespace {

Term replace_rec(const Term& t, const Path& p, std::size_t depth, const Term& r) {
  if (depth == p.size()) return r;
  std::vector<Term> kids = t.kids();
  kids.at(p[depth]) = replace_rec(kids.at(p[depth]), p, depth + 1, r);
  return with_kids(t, std::move(kids));
}

}  // namespace

Term replace_at(const Term& t, const Path& p, const Term& replacement) { return replace_rec(t, p, 0, replacement); }

std::vector<Term> summands(const Term& t) {
  if (t.is_zero()) return {};
  if (t.is(Kind::Sum)) return t.kids();
  return {t};
}

}  // namespace afc
