#pragma once

// Polynomial functors Vect_Q^m -> Vect_Q evaluated on finite dimensions.
// A morphism V_i -> W_i is a dim(W_i) x dim(V_i) matrix; map() returns F(V) -> F(W).

#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "afc/concrete/matrix.hpp"

namespace afc::concrete {

using Dims = std::vector<std::size_t>;

class CFunctor {
 public:
  virtual ~CFunctor() = default;
  virtual int arity() const = 0;
  virtual std::size_t dim(const Dims& d) const = 0;
  virtual Matrix map(const std::vector<Matrix>& ms) const = 0;
  virtual std::string name() const = 0;

  std::size_t dim1(std::size_t d) const { return dim(Dims{d}); }
  Matrix map1(const Matrix& m) const { return map(std::vector<Matrix>{m}); }
};

using FunctorPtr = std::shared_ptr<const CFunctor>;

/// Retract V ⇄ ambient: proj * incl = I, incl * proj = the idempotent it came from.
struct Split {
  Matrix incl;  // ambient x r
  Matrix proj;  // r x ambient
  std::size_t rank() const { return incl.cols(); }
};

/// Throws InvariantViolation unless e is an idempotent.
Split split_idempotent(const Matrix& e);

FunctorPtr constant(std::size_t dim, int arity = 1);
FunctorPtr projection(int arity, int slot);
FunctorPtr identity();
FunctorPtr tensor_power(int n);
FunctorPtr sym_power(int n);
FunctorPtr oplus(FunctorPtr a, FunctorPtr b);
/// outer(inner_1, ..., inner_m); all inner functors share one arity.
FunctorPtr compose(FunctorPtr outer, std::vector<FunctorPtr> inner);
FunctorPtr compose(FunctorPtr outer, FunctorPtr inner);
/// x |-> h(x, ..., x)
FunctorPtr diagonal(FunctorPtr h);

/// cr_n in one slot: the slot is replaced by n slots x_1..x_n and the value is
/// the part of h(.., x_1 ⊕ ... ⊕ x_n, ..) killed by no ρ_i.
class SlotCrossEffect : public CFunctor {
 public:
  SlotCrossEffect(FunctorPtr base, int slot, int n);
  int arity() const override { return base_->arity() + n_ - 1; }
  std::size_t dim(const Dims& d) const override { return split(d).rank(); }
  Matrix map(const std::vector<Matrix>& ms) const override;
  std::string name() const override;

  const Split& split(const Dims& d) const;
  const FunctorPtr& base() const { return base_; }
  int slot() const { return slot_; }
  int order() const { return n_; }
  Dims ambient(const Dims& d) const;

 private:
  FunctorPtr base_;
  int slot_;
  int n_;
  mutable std::map<Dims, Split> cache_;
};

/// C_2 in one slot: x ↦ cr_2 h(.., x, x, ..), sitting inside h(.., x ⊕ x, ..).
class SlotC2 : public CFunctor {
 public:
  SlotC2(FunctorPtr base, int slot);
  int arity() const override { return base()->arity(); }
  std::size_t dim(const Dims& d) const override { return split(d).rank(); }
  Matrix map(const std::vector<Matrix>& ms) const override;
  std::string name() const override;

  const Split& split(const Dims& d) const { return cr_->split(doubled(d)); }
  const FunctorPtr& base() const { return cr_->base(); }
  int slot() const { return cr_->slot(); }
  /// Dims with the slot dimension doubled (the ambient of split()).
  Dims ambient(const Dims& d) const;

 private:
  Dims doubled(const Dims& d) const;
  std::shared_ptr<const SlotCrossEffect> cr_;
};

FunctorPtr cross_effect(FunctorPtr f, int n);
FunctorPtr slot_cross_effect(FunctorPtr h, int slot, int n);
std::shared_ptr<const SlotC2> slot_c2(FunctorPtr h, int slot);
/// cr_1 in one slot.
FunctorPtr slot_reduce(FunctorPtr h, int slot);

/// Grammar: sum := comp ('+' comp)* ; comp := atom ('.' atom)* ;
/// atom := Id | T<n> | S<n> | C<n> | '(' sum ')'.
FunctorPtr parse_functor_spec(std::string_view spec);

}  // namespace afc::concrete
