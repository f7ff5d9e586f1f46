#include "afc/concrete/matrix.hpp"

#include <algorithm>
#include <map>

#include "afc/error.hpp"

namespace afc::concrete {

namespace {

// Dense scratch row that remembers which columns it touched.
class Accumulator {
 public:
  explicit Accumulator(std::size_t n) : vals_(n), seen_(n, false) {}

  void add(std::size_t j, const Rational& v) {
    if (!seen_[j]) {
      seen_[j] = true;
      touched_.push_back(j);
      vals_[j] = v;
    } else {
      vals_[j] += v;
    }
  }

  Matrix::Row take() {
    std::sort(touched_.begin(), touched_.end());
    Matrix::Row out;
    for (std::size_t j : touched_) {
      if (sgn(vals_[j]) != 0) out.emplace_back(j, vals_[j]);
      seen_[j] = false;
    }
    touched_.clear();
    return out;
  }

 private:
  std::vector<Rational> vals_;
  std::vector<bool> seen_;
  std::vector<std::size_t> touched_;
};

Matrix::Row combine(const Matrix::Row& a, const Matrix::Row& b, const Rational& sb) {
  Matrix::Row out;
  out.reserve(a.size() + b.size());
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < a.size() || j < b.size()) {
    if (j == b.size() || (i < a.size() && a[i].first < b[j].first)) {
      out.push_back(a[i++]);
    } else if (i == a.size() || b[j].first < a[i].first) {
      out.emplace_back(b[j].first, sb * b[j].second);
      ++j;
    } else {
      Rational v = a[i].second + sb * b[j].second;
      if (sgn(v) != 0) out.emplace_back(a[i].first, v);
      ++i;
      ++j;
    }
  }
  return out;
}

}  // namespace

Matrix::Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols) {}

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m.rows_[i].emplace_back(i, Rational(1));
  return m;
}

Matrix Matrix::from_dense(const std::vector<std::vector<Rational>>& rows) {
  const std::size_t c = rows.empty() ? 0 : rows.front().size();
  Matrix m(rows.size(), c);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != c) throw DimensionMismatch("ragged dense matrix");
    for (std::size_t j = 0; j < c; ++j) {
      if (sgn(rows[i][j]) != 0) m.rows_[i].emplace_back(j, rows[i][j]);
    }
  }
  return m;
}

Rational Matrix::at(std::size_t i, std::size_t j) const {
  const Row& r = rows_.at(i);
  auto it = std::lower_bound(r.begin(), r.end(), j, [](const auto& e, std::size_t c) { return e.first < c; });
  if (it != r.end() && it->first == j) return it->second;
  return Rational(0);
}

void Matrix::set(std::size_t i, std::size_t j, const Rational& v) {
  if (j >= cols_) throw DimensionMismatch("column index out of range");
  Row& r = rows_.at(i);
  auto it = std::lower_bound(r.begin(), r.end(), j, [](const auto& e, std::size_t c) { return e.first < c; });
  if (it != r.end() && it->first == j) {
    if (sgn(v) == 0) {
      r.erase(it);
    } else {
      it->second = v;
    }
  } else if (sgn(v) != 0) {
    r.insert(it, {j, v});
  }
}

void Matrix::set_row(std::size_t i, Row r) {
  std::sort(r.begin(), r.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  std::erase_if(r, [](const auto& e) { return sgn(e.second) == 0; });
  if (!r.empty() && r.back().first >= cols_) throw DimensionMismatch("column index out of range");
  rows_.at(i) = std::move(r);
}

std::size_t Matrix::nnz() const {
  std::size_t n = 0;
  for (const auto& r : rows_) n += r.size();
  return n;
}

Matrix Matrix::operator*(const Matrix& b) const {
  if (cols_ != b.rows()) {
    throw DimensionMismatch("product of " + std::to_string(rows()) + "x" + std::to_string(cols_) + " and " +
                            std::to_string(b.rows()) + "x" + std::to_string(b.cols()));
  }
  Matrix out(rows(), b.cols());
  Accumulator acc(b.cols());
  for (std::size_t i = 0; i < rows(); ++i) {
    if (rows_[i].empty()) continue;
    for (const auto& [k, a] : rows_[i]) {
      for (const auto& [j, v] : b.rows_[k]) acc.add(j, a * v);
    }
    out.rows_[i] = acc.take();
  }
  return out;
}

Matrix Matrix::operator+(const Matrix& b) const {
  if (rows() != b.rows() || cols_ != b.cols()) throw DimensionMismatch("sum of differently sized matrices");
  Matrix out(rows(), cols_);
  for (std::size_t i = 0; i < rows(); ++i) out.rows_[i] = combine(rows_[i], b.rows_[i], Rational(1));
  return out;
}

Matrix Matrix::operator-(const Matrix& b) const {
  if (rows() != b.rows() || cols_ != b.cols()) throw DimensionMismatch("difference of differently sized matrices");
  Matrix out(rows(), cols_);
  for (std::size_t i = 0; i < rows(); ++i) out.rows_[i] = combine(rows_[i], b.rows_[i], Rational(-1));
  return out;
}

Matrix Matrix::scaled(const Rational& c) const {
  if (sgn(c) == 0) return Matrix(rows(), cols_);
  Matrix out = *this;
  for (auto& r : out.rows_) {
    for (auto& e : r) e.second *= c;
  }
  return out;
}

Matrix Matrix::transpose() const {
  Matrix out(cols_, rows());
  for (std::size_t i = 0; i < rows(); ++i) {
    for (const auto& [j, v] : rows_[i]) out.rows_[j].emplace_back(i, v);
  }
  return out;
}

Matrix Matrix::select_rows(const std::vector<std::size_t>& idx) const {
  Matrix out(idx.size(), cols_);
  for (std::size_t i = 0; i < idx.size(); ++i) out.rows_[i] = rows_.at(idx[i]);
  return out;
}

Matrix Matrix::select_cols(const std::vector<std::size_t>& idx) const {
  std::vector<std::vector<std::size_t>> where(cols_);
  for (std::size_t k = 0; k < idx.size(); ++k) where.at(idx[k]).push_back(k);
  Matrix out(rows(), idx.size());
  for (std::size_t i = 0; i < rows(); ++i) {
    Row r;
    for (const auto& [j, v] : rows_[i]) {
      for (std::size_t k : where[j]) r.emplace_back(k, v);
    }
    out.set_row(i, std::move(r));
  }
  return out;
}

bool operator==(const Matrix& a, const Matrix& b) { return a.cols_ == b.cols_ && a.rows_ == b.rows_; }

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t k = 0; k < b.rows(); ++k) {
      Matrix::Row r;
      for (const auto& [j, x] : a.row(i)) {
        for (const auto& [l, y] : b.row(k)) r.emplace_back(j * b.cols() + l, x * y);
      }
      out.set_row(i * b.rows() + k, std::move(r));
    }
  }
  return out;
}

Matrix direct_sum(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() + b.rows(), a.cols() + b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) out.set_row(i, a.row(i));
  for (std::size_t i = 0; i < b.rows(); ++i) {
    Matrix::Row r;
    for (const auto& [j, v] : b.row(i)) r.emplace_back(a.cols() + j, v);
    out.set_row(a.rows() + i, std::move(r));
  }
  return out;
}

Matrix vstack(const std::vector<Matrix>& blocks, std::size_t cols) {
  std::size_t n = 0;
  for (const auto& b : blocks) {
    if (b.cols() != cols) throw DimensionMismatch("vstack of blocks with different widths");
    n += b.rows();
  }
  Matrix out(n, cols);
  std::size_t at = 0;
  for (const auto& b : blocks) {
    for (std::size_t i = 0; i < b.rows(); ++i) out.set_row(at++, b.row(i));
  }
  return out;
}

namespace {

// Forward elimination; rows keep leading entry 1 at their pivot column.
std::map<std::size_t, Matrix::Row> echelon_rows(const Matrix& m) {
  std::map<std::size_t, Matrix::Row> piv;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    Matrix::Row r = m.row(i);
    while (!r.empty()) {
      auto it = piv.find(r.front().first);
      if (it == piv.end()) break;
      Rational c = -r.front().second;
      r = combine(r, it->second, c);
    }
    if (r.empty()) continue;
    Rational inv = 1 / r.front().second;
    for (auto& e : r) e.second *= inv;
    piv.emplace(r.front().first, std::move(r));
  }
  return piv;
}

}  // namespace

Echelon rref(const Matrix& m) {
  auto piv = echelon_rows(m);
  // Back substitution, last pivot first.
  for (auto it = piv.rbegin(); it != piv.rend(); ++it) {
    const std::size_t c = it->first;
    for (auto jt = piv.begin(); jt->first < c; ++jt) {
      Rational v(0);
      for (const auto& e : jt->second) {
        if (e.first == c) {
          v = e.second;
          break;
        }
        if (e.first > c) break;
      }
      if (sgn(v) != 0) jt->second = combine(jt->second, it->second, -v);
    }
  }
  Echelon out{Matrix(piv.size(), m.cols()), {}};
  std::size_t i = 0;
  for (auto& [c, r] : piv) {
    out.reduced.set_row(i++, std::move(r));
    out.pivots.push_back(c);
  }
  return out;
}

std::size_t rank(const Matrix& m) { return echelon_rows(m).size(); }

}  // namespace afc::concrete
