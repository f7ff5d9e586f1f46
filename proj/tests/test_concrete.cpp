#include <catch_amalgamated.hpp>

#include <chrono>
#include <fstream>
#include <random>

#include <json.hpp>

#include "afc/calculus.hpp"
#include "afc/concrete/complex.hpp"
#include "afc/concrete/evaluate.hpp"
#include "afc/concrete/functor.hpp"
#include "afc/concrete/matrix.hpp"
#include "afc/text.hpp"

using namespace afc;
using namespace afc::concrete;

namespace {

Term T(const std::string& s) { return canonicalize(parse_term(s)); }

const std::vector<std::string> kLibrary = {"Id", "C2", "T2", "T3", "S2", "S3", "T2+Id", "S2+C1", "T2.(Id+C1)"};

Matrix random_matrix(std::mt19937_64& rng, std::size_t r, std::size_t c) {
  std::uniform_int_distribution<int> u(-3, 3);
  Matrix m(r, c);
  for (std::size_t i = 0; i < r; ++i) {
    for (std::size_t j = 0; j < c; ++j) m.set(i, j, Rational(u(rng)));
  }
  return m;
}

// Dense elimination, written separately from the library's rref.
std::size_t dense_rank(const Matrix& m) {
  std::vector<std::vector<Rational>> a(m.rows(), std::vector<Rational>(m.cols()));
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) a[i][j] = m.at(i, j);
  }
  std::size_t r = 0;
  for (std::size_t c = 0; c < m.cols() && r < a.size(); ++c) {
    std::size_t p = r;
    while (p < a.size() && a[p][c] == 0) ++p;
    if (p == a.size()) continue;
    std::swap(a[p], a[r]);
    for (std::size_t i = r + 1; i < a.size(); ++i) {
      const Rational f = a[i][c] / a[r][c];
      for (std::size_t j = c; j < m.cols(); ++j) a[i][j] -= f * a[r][j];
    }
    ++r;
  }
  return r;
}

std::size_t power(std::size_t b, int e) {
  std::size_t out = 1;
  while (e-- > 0) out *= b;
  return out;
}

std::size_t binom(std::size_t n, std::size_t k) {
  std::size_t out = 1;
  for (std::size_t i = 1; i <= k; ++i) out = out * (n - k + i) / i;
  return out;
}

// dim cr_k T_n(d_1..d_k): words of length n using every letter, letter i
// contributing d_i.
std::size_t tensor_cross_dim(int n, const Dims& d) {
  const std::size_t k = d.size();
  std::size_t total = 0;
  for (std::size_t code = 0; code < power(k, n); ++code) {
    std::size_t c = code;
    std::size_t prod = 1;
    std::vector<bool> used(k);
    for (int i = 0; i < n; ++i) {
      used[c % k] = true;
      prod *= d[c % k];
      c /= k;
    }
    if (std::all_of(used.begin(), used.end(), [](bool b) { return b; })) total += prod;
  }
  return total;
}

// dim cr_k S_n(d_1..d_k): multidegrees (n_1..n_k), all n_i >= 1.
std::size_t sym_cross_dim(int n, const Dims& d, std::size_t i = 0) {
  if (i == d.size()) return n == 0 ? 1 : 0;
  std::size_t total = 0;
  for (int ni = 1; ni <= n; ++ni) total += binom(d[i] + ni - 1, ni) * sym_cross_dim(n - ni, d, i + 1);
  return total;
}

std::vector<Dims> all_dims(std::size_t k, std::size_t max) {
  std::vector<Dims> out{{}};
  for (std::size_t i = 0; i < k; ++i) {
    std::vector<Dims> next;
    for (const auto& d : out) {
      for (std::size_t v = 0; v <= max; ++v) {
        Dims e = d;
        e.push_back(v);
        next.push_back(e);
      }
    }
    out = next;
  }
  return out;
}

std::size_t sum(const Dims& d) {
  std::size_t s = 0;
  for (auto v : d) s += v;
  return s;
}

nlohmann::json fixture(const std::string& name) {
  std::ifstream in(std::string(AFC_FIXTURE_DIR) + "/" + name);
  REQUIRE(in.good());
  return nlohmann::json::parse(in);
}

Assignment with_functors(std::map<std::string, std::string> specs, std::size_t dim, int top) {
  Assignment a;
  for (const auto& [name, spec] : specs) a.functors[name] = parse_functor_spec(spec);
  a.default_dim = dim;
  a.top = top;
  return a;
}

}  // namespace

TEST_CASE("matrix arithmetic") {
  std::mt19937_64 rng(1);
  for (int t = 0; t < 20; ++t) {
    const Matrix a = random_matrix(rng, 3, 4);
    const Matrix b = random_matrix(rng, 4, 2);
    const Matrix c = random_matrix(rng, 2, 3);
    const Matrix d = random_matrix(rng, 3, 2);
    CHECK((a * b) * c == a * (b * c));
    CHECK(kron(a * b, c * d) == kron(a, c) * kron(b, d));
    CHECK((a * b).transpose() == b.transpose() * a.transpose());
    CHECK(a + a == a.scaled(2));
    CHECK((a - a).is_zero());
    CHECK(rank(a) == dense_rank(a));
    CHECK(rank(a * b * c) == dense_rank(a * b * c));
  }
  const Matrix m = Matrix::from_dense({{1, 2, 3}, {2, 4, 6}, {0, 1, 1}});
  const auto e = rref(m);
  CHECK(e.pivots == std::vector<std::size_t>{0, 1});
  CHECK(e.reduced == Matrix::from_dense({{1, 0, 1}, {0, 1, 1}}));
  CHECK(rank(Matrix::identity(5)) == 5);
  CHECK(rank(Matrix::zero(3, 4)) == 0);
}

TEST_CASE("functors preserve composition and identities") {
  std::mt19937_64 rng(2);
  for (const auto& spec : kLibrary) {
    INFO(spec);
    const auto f = parse_functor_spec(spec);
    for (int t = 0; t < 5; ++t) {
      const Matrix a = random_matrix(rng, 2, 2);
      const Matrix b = random_matrix(rng, 2, 2);
      CHECK(f->map1(a * b) == f->map1(a) * f->map1(b));
    }
    for (std::size_t d = 0; d <= 3; ++d) CHECK(f->map1(Matrix::identity(d)) == Matrix::identity(f->dim1(d)));
    const Matrix r = random_matrix(rng, 3, 2);
    CHECK(f->map1(r).rows() == f->dim1(3));
    CHECK(f->map1(r).cols() == f->dim1(2));
  }
}

TEST_CASE("cross-effect idempotents split") {
  for (const auto& spec : kLibrary) {
    INFO(spec);
    const auto f = parse_functor_spec(spec);
    for (int n = 1; n <= 3; ++n) {
      const auto cr = std::dynamic_pointer_cast<const SlotCrossEffect>(cross_effect(f, n));
      REQUIRE(cr);
      for (const auto& d : all_dims(n, 3)) {
        const Split& s = cr->split(d);
        const Matrix e = s.incl * s.proj;
        CHECK(e * e == e);
        CHECK(s.proj * s.incl == Matrix::identity(s.rank()));
      }
    }
  }
}

TEST_CASE("cross-effect dimensions follow the recursive definition") {
  const auto t0 = std::chrono::steady_clock::now();
  for (const auto& spec : kLibrary) {
    INFO(spec);
    const auto f = parse_functor_spec(spec);
    const auto cr1 = cross_effect(f, 1);
    const auto cr2 = cross_effect(f, 2);
    const auto cr3 = cross_effect(f, 3);
    for (std::size_t x = 0; x <= 3; ++x) CHECK(f->dim1(x) == f->dim1(0) + cr1->dim1(x));
    for (const auto& d : all_dims(2, 3)) {
      CHECK(cr1->dim1(d[0] + d[1]) == cr1->dim1(d[0]) + cr1->dim1(d[1]) + cr2->dim(d));
    }
    for (const auto& d : all_dims(3, 3)) {
      CHECK(cr2->dim({d[0] + d[1], d[2]}) == cr2->dim({d[0], d[2]}) + cr2->dim({d[1], d[2]}) + cr3->dim(d));
    }
  }
  CHECK(std::chrono::steady_clock::now() - t0 < std::chrono::seconds(30));
}

TEST_CASE("cross effects of tensor and symmetric powers") {
  for (int n = 1; n <= 3; ++n) {
    const auto tn = tensor_power(n);
    const auto sn = sym_power(n);
    for (int k = 1; k <= 3; ++k) {
      const auto ct = cross_effect(tn, k);
      const auto cs = cross_effect(sn, k);
      for (const auto& d : all_dims(k, 3)) {
        INFO("n=" << n << " k=" << k);
        CHECK(ct->dim(d) == tensor_cross_dim(n, d));
        CHECK(cs->dim(d) == sym_cross_dim(n, d));
      }
    }
  }
  const auto c = cross_effect(tensor_power(2), 2);
  for (std::size_t m = 0; m <= 3; ++m) {
    for (std::size_t n = 0; n <= 3; ++n) CHECK(c->dim({m, n}) == 2 * m * n);
  }
}

TEST_CASE("cross effects vanish on the identity and on zero slots") {
  const auto id2 = cross_effect(identity(), 2);
  for (const auto& d : all_dims(2, 3)) CHECK(id2->dim(d) == 0);
  for (const auto& spec : kLibrary) {
    const auto f = parse_functor_spec(spec);
    for (int n = 1; n <= 3; ++n) {
      const auto cr = cross_effect(f, n);
      for (const auto& d : all_dims(n, 3)) {
        if (std::find(d.begin(), d.end(), 0) != d.end()) CHECK(cr->dim(d) == 0);
      }
    }
  }
}

TEST_CASE("cross effect is the joint kernel of the deletion maps") {
  for (const auto& spec : kLibrary) {
    INFO(spec);
    const auto f = parse_functor_spec(spec);
    for (int n = 2; n <= 3; ++n) {
      const auto cr = std::dynamic_pointer_cast<const SlotCrossEffect>(cross_effect(f, n));
      for (const auto& d : all_dims(n, 3)) {
        const std::size_t total = sum(d);
        std::vector<Matrix> deletions;
        std::size_t offset = 0;
        for (int i = 0; i < n; ++i) {
          Matrix p(total - d[i], total);
          std::size_t row = 0;
          for (std::size_t j = 0; j < total; ++j) {
            if (j < offset || j >= offset + d[i]) p.set(row++, j, 1);
          }
          offset += d[i];
          deletions.push_back(f->map1(p));
        }
        const Matrix stacked = vstack(deletions, f->dim1(total));
        const Split& s = cr->split(d);
        CHECK((stacked * s.incl).is_zero());
        CHECK(s.rank() == f->dim1(total) - rank(stacked));
      }
    }
  }
}

TEST_CASE("linearization complexes are complexes") {
  for (const auto& spec : kLibrary) {
    INFO(spec);
    const auto f = parse_functor_spec(spec);
    for (std::size_t d = 0; d <= 3; ++d) CHECK_NOTHROW(linearization_complex(f, d, d < 3 ? 3 : 2).validate());
  }
  const auto c2 = cross_effect(tensor_power(2), 2);
  CHECK_NOTHROW(multilinearization_complex(c2, {2, 2}, {0, 1}, 2).validate());
  CHECK_NOTHROW(multilinearization_complex(c2, {1, 2}, {1}, 3).validate());
  CHECK_NOTHROW(simultaneous_linearization(c2, 2, 3).validate());
  CHECK_NOTHROW(multilinearization_complex(cross_effect(parse_functor_spec("T2+Id"), 2), {2, 1}, {0, 1}, 2).validate());
}

TEST_CASE("a corrupted boundary fails validation") {
  auto c = linearization_complex(tensor_power(2), 2, 3);
  REQUIRE(c.boundary.size() >= 2);
  REQUIRE_FALSE(c.boundary[0].is_zero());
  // Perturb d2 in a column of d1 that is nonzero.
  std::size_t col = 0;
  while (col < c.boundary[0].cols() && (c.boundary[0] * Matrix::identity(c.boundary[0].cols()).select_cols({col})).is_zero()) ++col;
  c.boundary[1].set(col, 0, c.boundary[1].at(col, 0) + 1);
  CHECK_THROWS_AS(c.validate(), InvariantViolation);
}

TEST_CASE("homology of linearizations") {
  // A linear functor is its own linearization; a homogeneous functor of
  // degree at least 2 has contractible linearization over Q.
  for (std::size_t d = 1; d <= 3; ++d) {
    INFO("d = " << d);
    CHECK(linearization_complex(identity(), d, 3).homology() == std::vector<std::size_t>{d, 0, 0});
    CHECK(linearization_complex(parse_functor_spec("Id+C2"), d, 3).homology() == std::vector<std::size_t>{d, 0, 0});
    CHECK(linearization_complex(tensor_power(2), d, 3).homology() == std::vector<std::size_t>{0, 0, 0});
    CHECK(linearization_complex(sym_power(2), d, 2).homology() == std::vector<std::size_t>{0, 0});
    CHECK(linearization_complex(constant(4), d, 3).homology() == std::vector<std::size_t>{0, 0, 0});
  }
  CHECK(linearization_complex(tensor_power(3), 2, 2).homology() == std::vector<std::size_t>{0, 0});
  CHECK(linearization_complex(parse_functor_spec("T2+Id"), 2, 3).homology() == std::vector<std::size_t>{2, 0, 0});
}

TEST_CASE("sequential and simultaneous linearization differ") {
  const auto w = fixture("linearization_witness.json");
  const auto h = cross_effect(parse_functor_spec(w["functor"].get<std::string>()), 2);
  const auto d = w["dims"].get<Dims>();
  const int top = w["top"];
  CHECK(multilinearization_complex(h, d, {0, 1}, top).homology() == w["sequential"].get<std::vector<std::size_t>>());
  CHECK(simultaneous_linearization(h, d[0], top).homology() == w["simultaneous"].get<std::vector<std::size_t>>());

  // The same two readings through the term evaluator.
  auto a = with_functors({{"F", w["functor"]}}, d[0], top);
  CHECK(homology(T("D1^1 D1^2 cr2 F(v, vbar)"), a) == w["sequential"].get<std::vector<std::size_t>>());
  CHECK(homology(T("D1[v] cr2 F(v, v)"), a) == w["simultaneous"].get<std::vector<std::size_t>>());
}

TEST_CASE("term evaluation") {
  auto a = with_functors({{"F", "T2"}, {"G", "Id"}}, 2, 2);
  CHECK(homology(T("F(x)"), a) == std::vector<std::size_t>{4, 0});
  CHECK(homology(T("F(x) + G(x)"), a) == std::vector<std::size_t>{6, 0});
  CHECK(homology(T("D1 G(x)"), a) == std::vector<std::size_t>{2, 0});
  CHECK(homology(T("D1 F(x)"), a) == std::vector<std::size_t>{0, 0});
  CHECK(homology(T("cr2 F(x, w)"), a) == std::vector<std::size_t>{8, 0});
  a.dims["w"] = 3;
  CHECK(homology(T("cr2 F(x, w)"), a) == std::vector<std::size_t>{12, 0});
  CHECK(homology(T("0"), a) == std::vector<std::size_t>{0, 0});
  CHECK_THROWS_AS(homology(T("Nabla F(v; x)"), a), UnsupportedShape);
  CHECK_THROWS_AS(homology(T("H(x)"), a), Error);
}

TEST_CASE("homology fixture values") {
  const auto j = fixture("concrete_homology.json");
  for (const auto& c : j["cases"]) {
    INFO(c["term"].get<std::string>());
    auto a = with_functors(c["functors"].get<std::map<std::string, std::string>>(), c["dim"], c["top"]);
    CHECK(homology(T(c["term"]), a) == c["homology"].get<std::vector<std::size_t>>());
  }
}

TEST_CASE("rule instances agree in homology") {
  const std::set<RuleId> unsupported{RuleId::R7a, RuleId::R7b, RuleId::R8b, RuleId::R9};
  for (RuleId r : kAllRules) {
    INFO(rule_name(r));
    const auto c = check_rule_concrete(r);
    CHECK(c.supported == (unsupported.count(r) == 0));
    if (c.supported) {
      CHECK(c.agree());
      CHECK(c.lhs_homology.size() == static_cast<std::size_t>(c.top));
    } else {
      CHECK_FALSE(c.reason.empty());
    }
    const auto j = to_json(c);
    CHECK(j["rule"] == std::string(rule_name(r)));
  }
}

TEST_CASE("contractibility instance") {
  const auto c = check_rule_concrete(RuleId::R5);
  REQUIRE(c.supported);
  CHECK(c.functors.at("F") == "T2");
  CHECK(c.functors.at("G") == "T2");
  CHECK(c.lhs_homology == std::vector<std::size_t>{0, 0});
  CHECK(c.rhs_homology == std::vector<std::size_t>{0, 0});
}

TEST_CASE("linearization idempotence on several functors") {
  for (const std::string spec : {"T2+Id", "S2+Id", "Id+C1", "T3+Id+Id"}) {
    for (std::size_t d = 1; d <= 2; ++d) {
      INFO(spec << " d=" << d);
      CheckOverrides o;
      o.functors["F"] = spec;
      o.dim = d;
      const auto c = check_rule_concrete(RuleId::R8a, o);
      REQUIRE(c.supported);
      CHECK(c.agree());
      CHECK(c.lhs_homology.size() == 2);
    }
  }
}

TEST_CASE("chain-rule trace steps are sound where both sides evaluate") {
  const Functor F{FunctorAtom::abstract("F")};
  const Functor G{FunctorAtom::abstract("G")};
  const auto sides = expand_sides(2, F, G);
  auto a = with_functors({{"F", "T2+Id"}, {"G", "T2+Id"}}, 1, 2);
  int checked = 0;
  for (const auto* nf : {&sides.lhs, &sides.rhs}) {
    for (std::size_t i = 0; i < nf->trace.size(); i += 3) {
      const auto& st = nf->trace[i];
      std::vector<std::size_t> before;
      std::vector<std::size_t> after;
      try {
        before = homology(st.before, a);
        after = homology(st.after, a);
      } catch (const UnsupportedShape&) {
        continue;
      }
      INFO(rule_name(st.rule) << ": " << to_text(st.before) << "  ->  " << to_text(st.after));
      CHECK(before == after);
      ++checked;
    }
  }
  CHECK(checked > 10);
}
