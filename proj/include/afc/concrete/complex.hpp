#pragma once

// Linearization complexes: bar constructions on C_2 = cr_2 ∘ diag with counit ε.

#include <functional>
#include <vector>

#include "afc/concrete/functor.hpp"

namespace afc::concrete {

/// Chain complex E_0 <- E_1 <- ... <- E_N (truncated at N).
struct ChainComplex {
  std::vector<std::size_t> dims;  // dims[k] = dim E_k
  std::vector<Matrix> boundary;   // boundary[k-1] : E_k -> E_{k-1}

  int top() const { return static_cast<int>(dims.size()) - 1; }
  /// Throws InvariantViolation if some ∂∘∂ is nonzero or a block has the wrong shape.
  void validate() const;
  /// Betti numbers H_0 .. H_{N-1}; H_N would need ∂_{N+1}.
  std::vector<std::size_t> homology() const;
};

ChainComplex zero_complex(int top);
ChainComplex concentrated(std::size_t dim0, int top);
/// Termwise direct sum.
ChainComplex oplus(const ChainComplex& a, const ChainComplex& b);

/// Components of a natural transformation, indexed by input dimensions.
using NatTrans = std::function<Matrix(const Dims&)>;

/// ε_h : C_2 h -> h in the slot of c.
NatTrans counit(const std::shared_ptr<const SlotC2>& c);
/// C_2 τ : C_2 a -> C_2 b, given the C_2 functors over a and b in the same slot.
NatTrans lift(const NatTrans& tau, const std::shared_ptr<const SlotC2>& src, const std::shared_ptr<const SlotC2>& tgt);

/// D_1 of a one-variable functor at dimension d: degree k is C_2^k cr_1 f.
ChainComplex linearization_complex(const FunctorPtr& f, std::size_t d, int top);

/// Sequential D_1 in each listed slot (innermost slot last), totalised.
/// Other slots are held at their given dimension.
ChainComplex multilinearization_complex(const FunctorPtr& h, const Dims& d, const std::vector<int>& slots, int top);

/// Simultaneous D_1: substitute the diagonal, then linearize once.
ChainComplex simultaneous_linearization(const FunctorPtr& h, std::size_t d, int top);

}  // namespace afc::concrete
