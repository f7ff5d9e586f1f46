#pragma once

// Expression grammar for formal objects and applied functor terms.
//
// Objects (variables, the zero object, direct sums) and applied terms share
// one immutable node type: a direct sum of objects and a direct sum of
// applied terms are both biproducts, and the zero object doubles as the zero
// term. Every Term is a cheap handle onto a shared, never-mutated node.

#include <compare>
#include <cstddef>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "afc/error.hpp"

namespace afc {

enum class AtomRole { Abstract, Identity, ConstantAtZero };

/// A named functor symbol. Abstract atoms (F, G) are unary and not assumed
/// reduced; the identity is unary and reduced; a constant-at-zero atom models
/// the object X(0) for an abstract X and has arity 0.
struct FunctorAtom {
  std::string name;
  int arity = 1;
  bool reduced = false;
  AtomRole role = AtomRole::Abstract;

  static FunctorAtom abstract(std::string name);
  static FunctorAtom identity();
  static FunctorAtom at_zero(std::string base);

  bool is_identity() const { return role == AtomRole::Identity; }
  bool is_constant() const { return role == AtomRole::ConstantAtZero; }

  friend bool operator==(const FunctorAtom&, const FunctorAtom&) = default;
  friend std::strong_ordering operator<=>(const FunctorAtom& a, const FunctorAtom& b);
};

/// Functor head: an atom or a formal composite outer∘inner. Composites are
/// kept left-nested, so the inner functor of a composite is always an atom.
class Functor {
 public:
  Functor(FunctorAtom atom);  // NOLINT(google-explicit-constructor)
  static Functor compose(const Functor& outer, const Functor& inner);

  bool is_atom() const { return node_->outer == nullptr; }
  const FunctorAtom& atom() const;
  Functor outer() const;
  Functor inner() const;
  /// Number of composition nodes (0 for an atom).
  int compose_count() const;
  /// Atoms from outermost to innermost.
  std::vector<FunctorAtom> chain() const;

  friend bool operator==(const Functor& a, const Functor& b) { return (a <=> b) == 0; }
  friend std::strong_ordering operator<=>(const Functor& a, const Functor& b);

 private:
  struct Node {
    FunctorAtom atom;
    std::shared_ptr<const Node> outer;
    std::shared_ptr<const Node> inner;
  };
  explicit Functor(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

enum class Kind { Var, Zero, Sum, Apply, Cross, Lin, Nabla, Delta };

std::string_view kind_name(Kind k);

/// Applied functor expression. The per-slot mark vector on Apply/Cross counts
/// how many times that slot has been linearized (the slot notation D₁^i);
/// Lin(var, body) is simultaneous linearization in every occurrence of var.
class Term {
 public:
  Term();  // the zero term
  Kind kind() const { return node_->kind; }

  // Var: variable name. Lin: the linearized variable.
  const std::string& name() const { return node_->name; }
  // Apply/Cross/Nabla/Delta.
  const Functor& head() const;
  // Cross: n. Delta: order.
  int order() const { return node_->order; }
  // Sum summands; Apply/Cross arguments; Lin body (one child);
  // Nabla {direction, basepoint}; Delta {directions..., basepoint}.
  const std::vector<Term>& kids() const { return node_->kids; }
  const Term& kid(std::size_t i) const { return node_->kids.at(i); }
  const Term& body() const { return kid(0); }
  // Apply/Cross: linearization count per slot (same length as kids()).
  const std::vector<int>& marks() const { return node_->marks; }
  bool marked(std::size_t slot) const { return slot < node_->marks.size() && node_->marks[slot] > 0; }
  bool any_mark() const;

  bool is(Kind k) const { return kind() == k; }
  bool is_zero() const { return kind() == Kind::Zero; }
  /// Apply/Cross: head is an atom (not a composite).
  bool atom_headed() const;

  /// Number of nodes, functor heads counted once.
  std::size_t size() const;

  friend bool operator==(const Term& a, const Term& b);
  friend std::strong_ordering operator<=>(const Term& a, const Term& b);

  const void* identity_ptr() const { return node_.get(); }

 private:
  struct Node {
    Kind kind = Kind::Zero;
    std::string name;
    std::shared_ptr<const Functor> head;
    int order = 0;
    std::vector<Term> kids;
    std::vector<int> marks;
  };
  explicit Term(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;

  friend Term make_node(Kind, std::string, const Functor*, int, std::vector<Term>, std::vector<int>);
};

// Builders. They validate arity but do not canonicalize.
Term var(std::string name);
Term zero();
Term sum(std::vector<Term> summands);
Term operator+(const Term& a, const Term& b);
Term app(const Functor& head, std::vector<Term> args, std::vector<int> marks = {});
Term cross(int n, const Functor& head, std::vector<Term> args, std::vector<int> marks = {});
Term lin(std::string var, Term body);
Term nabla(const Functor& head, Term direction, Term basepoint);
Term delta(int order, const Functor& head, std::vector<Term> directions, Term basepoint);

/// Same node with a replaced child list (and marks, for Apply/Cross).
Term with_kids(const Term& t, std::vector<Term> kids);
Term with_kids(const Term& t, std::vector<Term> kids, std::vector<int> marks);

/// Canonical representative: sums flattened, Zero-pruned and sorted; cross
/// effects with sorted (argument, mark) slots; X(0) folded into the
/// constant-at-zero atom. Idempotent.
Term canonicalize(const Term& t);

/// Free variables. A Lin node keeps its own variable free: D₁^v H is again a
/// functor of v.
std::set<std::string> free_vars(const Term& t);
bool occurs(const Term& t, const std::string& v);

/// Replace every occurrence of a variable, including Lin binders.
Term rename_vars(const Term& t, const std::map<std::string, std::string>& renaming);

using AliasMap = std::map<std::string, std::string>;

/// Declared variable context; empty means "accept any name".
struct VarContext {
  std::set<std::string> names;
  static VarContext standard();  // {x, v, w, vbar}
  bool declares(const std::string& n) const { return names.empty() || names.count(n) > 0; }
};

/// Replace each aliased variable by its (transitively resolved) target, then
/// canonicalize. Throws ContextError for undeclared names and for cyclic maps.
Term collapse_aliases(const Term& t, const AliasMap& aliases, const VarContext& ctx = VarContext::standard());

/// Name of the fresh variable standing for a duplicated direction (v ↦ vbar).
std::string bar(const std::string& v);

// Subterm addressing: a path is a sequence of child indices.
using Path = std::vector<std::size_t>;
const Term& subterm(const Term& t, const Path& p);
Term replace_at(const Term& t, const Path& p, const Term& replacement);

/// Summands of a canonical term (a Sum's children, nothing for Zero, else the term itself).
std::vector<Term> summands(const Term& t);

}  // namespace afc
