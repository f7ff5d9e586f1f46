#include "afc/concrete/functor.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>

#include "afc/error.hpp"

namespace afc::concrete {

namespace {

Dims dims_in(const std::vector<Matrix>& ms) {
  Dims d;
  for (const auto& m : ms) d.push_back(m.cols());
  return d;
}

Dims dims_out(const std::vector<Matrix>& ms) {
  Dims d;
  for (const auto& m : ms) d.push_back(m.rows());
  return d;
}

void check_arity(const CFunctor& f, std::size_t got) {
  if (static_cast<int>(got) != f.arity()) {
    throw DimensionMismatch(f.name() + " expects " + std::to_string(f.arity()) + " arguments, got " +
                            std::to_string(got));
  }
}

std::size_t ipow(std::size_t b, int e) {
  std::size_t r = 1;
  for (int i = 0; i < e; ++i) r *= b;
  return r;
}

class Constant : public CFunctor {
 public:
  Constant(std::size_t c, int arity) : c_(c), arity_(arity) {}
  int arity() const override { return arity_; }
  std::size_t dim(const Dims& d) const override {
    check_arity(*this, d.size());
    return c_;
  }
  Matrix map(const std::vector<Matrix>& ms) const override {
    check_arity(*this, ms.size());
    return Matrix::identity(c_);
  }
  std::string name() const override { return "C" + std::to_string(c_); }

 private:
  std::size_t c_;
  int arity_;
};

class Projection : public CFunctor {
 public:
  Projection(int arity, int slot) : arity_(arity), slot_(slot) {}
  int arity() const override { return arity_; }
  std::size_t dim(const Dims& d) const override {
    check_arity(*this, d.size());
    return d[slot_];
  }
  Matrix map(const std::vector<Matrix>& ms) const override {
    check_arity(*this, ms.size());
    return ms[slot_];
  }
  std::string name() const override { return arity_ == 1 ? "Id" : "P" + std::to_string(slot_ + 1); }

 private:
  int arity_;
  int slot_;
};

class TensorPower : public CFunctor {
 public:
  explicit TensorPower(int n) : n_(n) {}
  int arity() const override { return 1; }
  std::size_t dim(const Dims& d) const override {
    check_arity(*this, d.size());
    return ipow(d[0], n_);
  }
  Matrix map(const std::vector<Matrix>& ms) const override {
    check_arity(*this, ms.size());
    Matrix out = ms[0];
    for (int i = 1; i < n_; ++i) out = kron(out, ms[0]);
    return out;
  }
  std::string name() const override { return "T" + std::to_string(n_); }

 private:
  int n_;
};

class SymPower : public CFunctor {
 public:
  explicit SymPower(int n) : n_(n) {}
  int arity() const override { return 1; }
  std::size_t dim(const Dims& d) const override {
    check_arity(*this, d.size());
    return split(d[0]).rank();
  }
  Matrix map(const std::vector<Matrix>& ms) const override {
    check_arity(*this, ms.size());
    Matrix t = ms[0];
    for (int i = 1; i < n_; ++i) t = kron(t, ms[0]);
    return split(ms[0].rows()).proj * t * split(ms[0].cols()).incl;
  }
  std::string name() const override { return "S" + std::to_string(n_); }

 private:
  // Symmetrizer (1/n!) Σ_σ σ on (Q^d)^{⊗n}.
  const Split& split(std::size_t d) const {
    auto it = cache_.find(d);
    if (it != cache_.end()) return it->second;
    const std::size_t total = ipow(d, n_);
    std::vector<int> perm(n_);
    std::iota(perm.begin(), perm.end(), 0);
    std::vector<std::vector<int>> perms;
    do {
      perms.push_back(perm);
    } while (std::next_permutation(perm.begin(), perm.end()));
    const Rational w(1, static_cast<unsigned long>(perms.size()));
    Matrix e(total, total);
    std::vector<std::size_t> digits(n_);
    for (std::size_t col = 0; col < total; ++col) {
      std::size_t c = col;
      for (int k = n_ - 1; k >= 0; --k) {
        digits[k] = c % d;
        c /= d;
      }
      for (const auto& p : perms) {
        std::size_t row = 0;
        for (int k = 0; k < n_; ++k) row = row * d + digits[p[k]];
        e.set(row, col, e.at(row, col) + w);
      }
    }
    return cache_.emplace(d, split_idempotent(e)).first->second;
  }

  int n_;
  mutable std::map<std::size_t, Split> cache_;
};

class Oplus : public CFunctor {
 public:
  Oplus(FunctorPtr a, FunctorPtr b) : a_(std::move(a)), b_(std::move(b)) {
    if (a_->arity() != b_->arity()) throw DimensionMismatch("direct sum of functors with different arities");
  }
  int arity() const override { return a_->arity(); }
  std::size_t dim(const Dims& d) const override { return a_->dim(d) + b_->dim(d); }
  Matrix map(const std::vector<Matrix>& ms) const override { return direct_sum(a_->map(ms), b_->map(ms)); }
  std::string name() const override { return "(" + a_->name() + " + " + b_->name() + ")"; }

 private:
  FunctorPtr a_;
  FunctorPtr b_;
};

class Compose : public CFunctor {
 public:
  Compose(FunctorPtr outer, std::vector<FunctorPtr> inner) : outer_(std::move(outer)), inner_(std::move(inner)) {
    check_arity(*outer_, inner_.size());
    if (inner_.empty()) throw DimensionMismatch("composition with no inner functors");
    for (const auto& g : inner_) {
      if (g->arity() != inner_.front()->arity()) throw DimensionMismatch("inner functors differ in arity");
    }
  }
  int arity() const override { return inner_.front()->arity(); }
  std::size_t dim(const Dims& d) const override {
    Dims mid;
    for (const auto& g : inner_) mid.push_back(g->dim(d));
    return outer_->dim(mid);
  }
  Matrix map(const std::vector<Matrix>& ms) const override {
    std::vector<Matrix> mid;
    for (const auto& g : inner_) mid.push_back(g->map(ms));
    return outer_->map(mid);
  }
  std::string name() const override {
    std::string s = outer_->name() + "(";
    for (std::size_t i = 0; i < inner_.size(); ++i) s += (i ? ", " : "") + inner_[i]->name();
    return s + ")";
  }

 private:
  FunctorPtr outer_;
  std::vector<FunctorPtr> inner_;
};

// Identity on everything except block k of a sum of blocks.
Matrix kill_block(const Dims& blocks, std::size_t k) {
  std::size_t total = std::accumulate(blocks.begin(), blocks.end(), std::size_t{0});
  Matrix m(total, total);
  std::size_t at = 0;
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    for (std::size_t i = 0; i < blocks[b]; ++i, ++at) {
      if (b != k) m.set(at, at, Rational(1));
    }
  }
  return m;
}

}  // namespace

Split split_idempotent(const Matrix& e) {
  if (e.rows() != e.cols()) throw DimensionMismatch("idempotent must be square");
  if (!(e * e == e)) throw InvariantViolation("matrix is not idempotent");
  Echelon r = rref(e);
  Split s{e.select_cols(r.pivots), std::move(r.reduced)};
  if (!(s.proj * s.incl == Matrix::identity(s.rank()))) throw InvariantViolation("idempotent splitting failed");
  return s;
}

FunctorPtr constant(std::size_t dim, int arity) { return std::make_shared<Constant>(dim, arity); }
FunctorPtr projection(int arity, int slot) {
  if (slot < 0 || slot >= arity) throw DomainError("projection slot out of range");
  return std::make_shared<Projection>(arity, slot);
}
FunctorPtr identity() { return projection(1, 0); }
FunctorPtr tensor_power(int n) {
  if (n < 1) throw DomainError("tensor power needs n >= 1");
  if (n == 1) return identity();
  return std::make_shared<TensorPower>(n);
}
FunctorPtr sym_power(int n) {
  if (n < 1) throw DomainError("symmetric power needs n >= 1");
  if (n == 1) return identity();
  return std::make_shared<SymPower>(n);
}
FunctorPtr oplus(FunctorPtr a, FunctorPtr b) { return std::make_shared<Oplus>(std::move(a), std::move(b)); }
FunctorPtr compose(FunctorPtr outer, std::vector<FunctorPtr> inner) {
  return std::make_shared<Compose>(std::move(outer), std::move(inner));
}
FunctorPtr compose(FunctorPtr outer, FunctorPtr inner) {
  return compose(std::move(outer), std::vector<FunctorPtr>{std::move(inner)});
}
FunctorPtr diagonal(FunctorPtr h) {
  std::vector<FunctorPtr> ids(h->arity(), identity());
  return compose(std::move(h), std::move(ids));
}

SlotCrossEffect::SlotCrossEffect(FunctorPtr base, int slot, int n) : base_(std::move(base)), slot_(slot), n_(n) {
  if (n < 1) throw DomainError("cross effect order must be >= 1");
  if (slot < 0 || slot >= base_->arity()) throw DomainError("cross effect slot out of range");
}

Dims SlotCrossEffect::ambient(const Dims& d) const {
  check_arity(*this, d.size());
  Dims out(d.begin(), d.begin() + slot_);
  out.push_back(std::accumulate(d.begin() + slot_, d.begin() + slot_ + n_, std::size_t{0}));
  out.insert(out.end(), d.begin() + slot_ + n_, d.end());
  return out;
}

const Split& SlotCrossEffect::split(const Dims& d) const {
  auto it = cache_.find(d);
  if (it != cache_.end()) return it->second;
  const Dims amb = ambient(d);
  const Dims blocks(d.begin() + slot_, d.begin() + slot_ + n_);
  std::vector<Matrix> ms;
  for (std::size_t a : amb) ms.push_back(Matrix::identity(a));
  const std::size_t total = base_->dim(amb);
  const Matrix id = Matrix::identity(total);
  Matrix e = id;
  for (int k = 0; k < n_; ++k) {
    ms[slot_] = kill_block(blocks, k);
    e = e * (id - base_->map(ms));
  }
  return cache_.emplace(d, split_idempotent(e)).first->second;
}

Matrix SlotCrossEffect::map(const std::vector<Matrix>& ms) const {
  check_arity(*this, ms.size());
  std::vector<Matrix> amb(ms.begin(), ms.begin() + slot_);
  Matrix block = ms[slot_];
  for (int k = 1; k < n_; ++k) block = direct_sum(block, ms[slot_ + k]);
  amb.push_back(std::move(block));
  amb.insert(amb.end(), ms.begin() + slot_ + n_, ms.end());
  return split(dims_out(ms)).proj * base_->map(amb) * split(dims_in(ms)).incl;
}

std::string SlotCrossEffect::name() const {
  std::string s = "cr" + std::to_string(n_) + "[" + std::to_string(slot_ + 1) + "]";
  return s + base_->name();
}

SlotC2::SlotC2(FunctorPtr base, int slot) : cr_(std::make_shared<SlotCrossEffect>(std::move(base), slot, 2)) {}

Dims SlotC2::doubled(const Dims& d) const {
  check_arity(*this, d.size());
  Dims out = d;
  out.insert(out.begin() + slot() + 1, d[slot()]);
  return out;
}

Dims SlotC2::ambient(const Dims& d) const {
  check_arity(*this, d.size());
  Dims out = d;
  out[slot()] *= 2;
  return out;
}

Matrix SlotC2::map(const std::vector<Matrix>& ms) const {
  check_arity(*this, ms.size());
  std::vector<Matrix> twice = ms;
  twice.insert(twice.begin() + slot() + 1, ms[slot()]);
  return cr_->map(twice);
}

std::string SlotC2::name() const { return "C2[" + std::to_string(slot() + 1) + "]" + base()->name(); }

FunctorPtr cross_effect(FunctorPtr f, int n) {
  if (f->arity() != 1) throw DomainError("cross_effect expects a one-variable functor");
  return std::make_shared<SlotCrossEffect>(std::move(f), 0, n);
}
FunctorPtr slot_cross_effect(FunctorPtr h, int slot, int n) {
  return std::make_shared<SlotCrossEffect>(std::move(h), slot, n);
}
std::shared_ptr<const SlotC2> slot_c2(FunctorPtr h, int slot) { return std::make_shared<SlotC2>(std::move(h), slot); }
FunctorPtr slot_reduce(FunctorPtr h, int slot) { return std::make_shared<SlotCrossEffect>(std::move(h), slot, 1); }

namespace {

class SpecParser {
 public:
  explicit SpecParser(std::string_view s) : s_(s) {}

  FunctorPtr parse() {
    FunctorPtr f = sum();
    skip();
    if (pos_ != s_.size()) throw ParseError("unexpected '" + std::string(1, s_[pos_]) + "' in functor spec", pos_);
    return f;
  }

 private:
  std::string_view s_;
  std::size_t pos_ = 0;

  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool eat(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  FunctorPtr sum() {
    FunctorPtr f = comp();
    while (eat('+')) f = oplus(f, comp());
    return f;
  }

  FunctorPtr comp() {
    FunctorPtr f = atom();
    while (eat('.')) f = compose(f, atom());
    return f;
  }

  int number() {
    const std::size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (pos_ == start) throw ParseError("expected a number in functor spec", pos_);
    if (pos_ - start > 3) throw ParseError("number too large in functor spec", start);
    return std::stoi(std::string(s_.substr(start, pos_ - start)));
  }

  FunctorPtr atom() {
    skip();
    if (eat('(')) {
      FunctorPtr f = sum();
      if (!eat(')')) throw ParseError("expected ')' in functor spec", pos_);
      return f;
    }
    if (s_.substr(pos_, 2) == "Id") {
      pos_ += 2;
      return identity();
    }
    if (pos_ >= s_.size()) throw ParseError("unexpected end of functor spec", pos_);
    const char c = s_[pos_++];
    const std::size_t at = pos_ - 1;
    int n = number();
    switch (c) {
      case 'T':
        if (n < 1) throw ParseError("T needs n >= 1", at);
        return tensor_power(n);
      case 'S':
        if (n < 1) throw ParseError("S needs n >= 1", at);
        return sym_power(n);
      case 'C':
        return constant(static_cast<std::size_t>(n));
      default:
        throw ParseError("unknown functor '" + std::string(1, c) + "'", at);
    }
  }
};

}  // namespace

FunctorPtr parse_functor_spec(std::string_view spec) { return SpecParser(spec).parse(); }

}  // namespace afc::concrete
