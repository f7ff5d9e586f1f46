#include "afc/concrete/complex.hpp"

#include <algorithm>
#include <map>

#include "afc/error.hpp"

namespace afc::concrete {

void ChainComplex::validate() const {
  if (boundary.size() + 1 != dims.size()) throw InvariantViolation("complex has the wrong number of boundary maps");
  for (std::size_t k = 1; k < dims.size(); ++k) {
    const Matrix& b = boundary[k - 1];
    if (b.rows() != dims[k - 1] || b.cols() != dims[k]) {
      throw InvariantViolation("boundary " + std::to_string(k) + " has shape " + std::to_string(b.rows()) + "x" +
                               std::to_string(b.cols()));
    }
  }
  for (std::size_t k = 2; k < dims.size(); ++k) {
    if (!(boundary[k - 2] * boundary[k - 1]).is_zero()) {
      throw InvariantViolation("boundary composite d" + std::to_string(k - 1) + " d" + std::to_string(k) +
                               " is nonzero");
    }
  }
}

std::vector<std::size_t> ChainComplex::homology() const {
  std::vector<std::size_t> ranks(dims.size() + 1, 0);  // ranks[k] = rank ∂_k
  for (std::size_t k = 1; k < dims.size(); ++k) ranks[k] = rank(boundary[k - 1]);
  std::vector<std::size_t> h;
  for (std::size_t k = 0; k + 1 < dims.size(); ++k) h.push_back(dims[k] - ranks[k] - ranks[k + 1]);
  return h;
}

ChainComplex zero_complex(int top) { return concentrated(0, top); }

ChainComplex concentrated(std::size_t dim0, int top) {
  ChainComplex c;
  c.dims.assign(static_cast<std::size_t>(top) + 1, 0);
  c.dims[0] = dim0;
  for (int k = 1; k <= top; ++k) c.boundary.emplace_back(c.dims[k - 1], 0);
  return c;
}

ChainComplex oplus(const ChainComplex& a, const ChainComplex& b) {
  if (a.dims.size() != b.dims.size()) throw DimensionMismatch("direct sum of complexes of different lengths");
  ChainComplex c;
  for (std::size_t k = 0; k < a.dims.size(); ++k) c.dims.push_back(a.dims[k] + b.dims[k]);
  for (std::size_t k = 0; k < a.boundary.size(); ++k) c.boundary.push_back(direct_sum(a.boundary[k], b.boundary[k]));
  return c;
}

namespace {

Matrix fold(std::size_t d) {
  Matrix m(d, 2 * d);
  for (std::size_t i = 0; i < d; ++i) {
    m.set(i, i, Rational(1));
    m.set(i, d + i, Rational(1));
  }
  return m;
}

}  // namespace

NatTrans counit(const std::shared_ptr<const SlotC2>& c) {
  return [c](const Dims& d) {
    const Dims amb = c->ambient(d);
    std::vector<Matrix> ms;
    for (std::size_t i = 0; i < d.size(); ++i) {
      ms.push_back(static_cast<int>(i) == c->slot() ? fold(d[i]) : Matrix::identity(d[i]));
    }
    return c->base()->map(ms) * c->split(d).incl;
  };
}

NatTrans lift(const NatTrans& tau, const std::shared_ptr<const SlotC2>& src, const std::shared_ptr<const SlotC2>& tgt) {
  if (src->slot() != tgt->slot()) throw DomainError("lift across different slots");
  return [tau, src, tgt](const Dims& d) { return tgt->split(d).proj * tau(src->ambient(d)) * src->split(d).incl; };
}

namespace {

using Index = std::vector<int>;

class Multicomplex {
 public:
  Multicomplex(FunctorPtr h, std::vector<int> slots) : slots_(std::move(slots)) {
    for (int s : slots_) {
      if (s < 0 || s >= h->arity()) throw DomainError("linearization slot out of range");
      if (std::count(slots_.begin(), slots_.end(), s) != 1) throw DomainError("linearization slot listed twice");
    }
    for (int s : slots_) h = slot_reduce(h, s);
    base_ = std::move(h);
  }

  const FunctorPtr& object(const Index& p) {
    auto it = objects_.find(p);
    if (it != objects_.end()) return it->second;
    return objects_.emplace(p, build(p)).first->second;
  }

  // ∂ in direction l at index p : X(p) -> X(p - e_l), sign included.
  NatTrans directional(const Index& p, std::size_t l) {
    Index q = p;
    std::fill(q.begin(), q.begin() + static_cast<std::ptrdiff_t>(l), 0);
    NatTrans tau = tower_boundary(q, l);
    int sign_exp = 0;
    for (std::size_t o = l; o-- > 0;) {
      sign_exp += p[o];
      for (int j = 1; j <= p[o]; ++j) {
        Index s = q;
        s[o] = j;
        Index t = s;
        t[l] -= 1;
        tau = lift(tau, c2(s), c2(t));
      }
      q[o] = p[o];
    }
    if (sign_exp % 2 == 0) return tau;
    return [tau](const Dims& d) { return tau(d).scaled(Rational(-1)); };
  }

 private:
  std::vector<int> slots_;
  FunctorPtr base_;
  std::map<Index, FunctorPtr> objects_;

  FunctorPtr build(const Index& p) {
    auto lead = std::find_if(p.begin(), p.end(), [](int v) { return v > 0; });
    if (lead == p.end()) return base_;
    const auto l = static_cast<std::size_t>(lead - p.begin());
    Index prev = p;
    prev[l] -= 1;
    return slot_c2(object(prev), slots_[l]);
  }

  std::shared_ptr<const SlotC2> c2(const Index& p) {
    auto c = std::dynamic_pointer_cast<const SlotC2>(object(p));
    if (!c) throw InvariantViolation("expected a C2 level in the multicomplex");
    return c;
  }

  // Alternating face sum on the tower in direction l, where all outer indices are 0.
  NatTrans tower_boundary(const Index& q, std::size_t l) {
    const int k = q[l];
    auto level = [&](int j) {
      Index r = q;
      r[l] = j;
      return r;
    };
    std::vector<NatTrans> faces;
    for (int i = 0; i < k; ++i) {
      // d_i = C_2^i ε_{X_{k-1-i}}
      const int m = k - 1 - i;
      NatTrans tau = counit(c2(level(m + 1)));
      for (int r = 1; r <= i; ++r) tau = lift(tau, c2(level(m + 1 + r)), c2(level(m + r)));
      faces.push_back(std::move(tau));
    }
    return [faces](const Dims& d) {
      Matrix acc = faces.front()(d);
      for (std::size_t i = 1; i < faces.size(); ++i) {
        Matrix f = faces[i](d);
        acc = i % 2 == 1 ? acc - f : acc + f;
      }
      return acc;
    };
  }
};

void indices_of_degree(std::size_t r, int k, Index& cur, std::vector<Index>& out) {
  if (cur.size() + 1 == r) {
    cur.push_back(k);
    out.push_back(cur);
    cur.pop_back();
    return;
  }
  for (int v = k; v >= 0; --v) {
    cur.push_back(v);
    indices_of_degree(r, k - v, cur, out);
    cur.pop_back();
  }
}

}  // namespace

ChainComplex multilinearization_complex(const FunctorPtr& h, const Dims& d, const std::vector<int>& slots, int top) {
  if (top < 0) throw DomainError("truncation degree must be >= 0");
  if (slots.empty()) throw DomainError("no linearization slots given");
  if (static_cast<int>(d.size()) != h->arity()) throw DimensionMismatch("dimension list does not match arity");
  Multicomplex mc(h, slots);

  std::vector<std::vector<Index>> by_degree(static_cast<std::size_t>(top) + 1);
  std::vector<std::map<Index, std::size_t>> offset(by_degree.size());
  ChainComplex c;
  for (int k = 0; k <= top; ++k) {
    Index cur;
    indices_of_degree(slots.size(), k, cur, by_degree[k]);
    std::size_t total = 0;
    for (const auto& p : by_degree[k]) {
      offset[k][p] = total;
      total += mc.object(p)->dim(d);
    }
    c.dims.push_back(total);
  }
  for (int k = 1; k <= top; ++k) {
    std::vector<Matrix::Row> rows(c.dims[k - 1]);
    for (const auto& p : by_degree[k]) {
      const std::size_t col0 = offset[k].at(p);
      for (std::size_t l = 0; l < slots.size(); ++l) {
        if (p[l] == 0) continue;
        Index t = p;
        t[l] -= 1;
        const std::size_t row0 = offset[k - 1].at(t);
        const Matrix block = mc.directional(p, l)(d);
        for (std::size_t i = 0; i < block.rows(); ++i) {
          for (const auto& [j, v] : block.row(i)) rows[row0 + i].emplace_back(col0 + j, v);
        }
      }
    }
    Matrix b(c.dims[k - 1], c.dims[k]);
    for (std::size_t i = 0; i < rows.size(); ++i) b.set_row(i, std::move(rows[i]));
    c.boundary.push_back(std::move(b));
  }
  c.validate();
  return c;
}

ChainComplex linearization_complex(const FunctorPtr& f, std::size_t d, int top) {
  if (f->arity() != 1) throw DomainError("linearization_complex expects a one-variable functor");
  return multilinearization_complex(f, Dims{d}, {0}, top);
}

ChainComplex simultaneous_linearization(const FunctorPtr& h, std::size_t d, int top) {
  return linearization_complex(diagonal(h), d, top);
}

}  // namespace afc::concrete
