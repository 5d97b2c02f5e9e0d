#pragma once

// Exact sparse linear algebra over Q or F_p.

#include "difop/scalar.hpp"

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <stdexcept>
#include <tuple>
#include <utility>
#include <vector>

namespace difop {

/// Sorted (index, coefficient) pairs; indices strictly increasing, no zeros.
class SparseVector {
 public:
  using Entry = std::pair<std::size_t, Scalar>;

  SparseVector() = default;

  /// Builds from arbitrary (possibly repeated, unsorted) entries.
  static SparseVector from_entries(std::vector<Entry> entries) {
    std::sort(entries.begin(), entries.end(),
              [](const Entry& a, const Entry& b) { return a.first < b.first; });
    SparseVector v;
    for (auto& [i, c] : entries) {
      if (!v.data_.empty() && v.data_.back().first == i)
        v.data_.back().second += c;
      else
        v.data_.emplace_back(i, std::move(c));
      if (v.data_.back().second.is_zero()) v.data_.pop_back();
    }
    return v;
  }

  static SparseVector unit(std::size_t i, Scalar c = 1) {
    SparseVector v;
    if (!c.is_zero()) v.data_.emplace_back(i, std::move(c));
    return v;
  }

  const std::vector<Entry>& entries() const { return data_; }
  std::vector<Entry>& mutable_entries() { return data_; }
  bool empty() const { return data_.empty(); }
  std::size_t size() const { return data_.size(); }
  auto begin() const { return data_.begin(); }
  auto end() const { return data_.end(); }

  Scalar at(std::size_t i) const {
    auto it = std::lower_bound(data_.begin(), data_.end(), i,
                               [](const Entry& e, std::size_t k) { return e.first < k; });
    if (it != data_.end() && it->first == i) return it->second;
    return Scalar(0);
  }

  /// this + factor * other
  SparseVector axpy(const Scalar& factor, const SparseVector& other) const {
    return linear_combination(Scalar(1), *this, factor, other);
  }

  /// a*x + b*y
  static SparseVector linear_combination(const Scalar& a, const SparseVector& x, const Scalar& b,
                                         const SparseVector& y) {
    SparseVector out;
    out.data_.reserve(x.size() + y.size());
    auto i = x.data_.begin();
    auto j = y.data_.begin();
    while (i != x.data_.end() || j != y.data_.end()) {
      if (j == y.data_.end() || (i != x.data_.end() && i->first < j->first)) {
        Scalar c = a * i->second;
        if (!c.is_zero()) out.data_.emplace_back(i->first, std::move(c));
        ++i;
      } else if (i == x.data_.end() || j->first < i->first) {
        Scalar c = b * j->second;
        if (!c.is_zero()) out.data_.emplace_back(j->first, std::move(c));
        ++j;
      } else {
        Scalar c = a * i->second + b * j->second;
        if (!c.is_zero()) out.data_.emplace_back(i->first, std::move(c));
        ++i;
        ++j;
      }
    }
    return out;
  }

  SparseVector scaled(const Scalar& c) const {
    SparseVector out;
    if (c.is_zero()) return out;
    out.data_.reserve(data_.size());
    for (const auto& [i, v] : data_) out.data_.emplace_back(i, v * c);
    return out;
  }

  friend bool operator==(const SparseVector& a, const SparseVector& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t k = 0; k < a.size(); ++k)
      if (a.data_[k].first != b.data_[k].first || a.data_[k].second != b.data_[k].second)
        return false;
    return true;
  }

 private:
  std::vector<Entry> data_;
};

/// Row-major sparse matrix.
class SparseMatrix {
 public:
  SparseMatrix() = default;
  SparseMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows) {}

  static SparseMatrix identity(std::size_t n) {
    SparseMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m.data_[i] = SparseVector::unit(i);
    return m;
  }

  /// Builds from dense integer rows (test convenience).
  static SparseMatrix from_dense(const std::vector<std::vector<long>>& rows, std::size_t cols,
                                 const Field& field = Field::rationals()) {
    SparseMatrix m(rows.size(), cols);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      std::vector<SparseVector::Entry> e;
      for (std::size_t j = 0; j < rows[i].size(); ++j)
        if (rows[i][j] != 0) e.emplace_back(j, field.from_int(rows[i][j]));
      m.data_[i] = SparseVector::from_entries(std::move(e));
    }
    return m;
  }

  /// Builds from (row, col, value) triplets; duplicates are summed.
  static SparseMatrix from_triplets(std::size_t rows, std::size_t cols,
                                    const std::vector<std::tuple<std::size_t, std::size_t, Scalar>>& t) {
    std::vector<std::vector<SparseVector::Entry>> buckets(rows);
    for (const auto& [r, c, v] : t) {
      if (r >= rows || c >= cols) throw std::out_of_range("triplet outside matrix bounds");
      buckets[r].emplace_back(c, v);
    }
    SparseMatrix m(rows, cols);
    for (std::size_t r = 0; r < rows; ++r) m.data_[r] = SparseVector::from_entries(std::move(buckets[r]));
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  const SparseVector& row(std::size_t i) const { return data_.at(i); }
  void set_row(std::size_t i, SparseVector v) {
    if (!v.empty() && v.entries().back().first >= cols_) throw std::out_of_range("row entry beyond column count");
    data_.at(i) = std::move(v);
  }

  Scalar at(std::size_t i, std::size_t j) const { return data_.at(i).at(j); }

  bool is_zero() const {
    return std::all_of(data_.begin(), data_.end(), [](const SparseVector& r) { return r.empty(); });
  }

  SparseVector multiply(const SparseVector& x) const {
    std::vector<SparseVector::Entry> out;
    for (std::size_t i = 0; i < rows_; ++i) {
      Scalar acc = 0;
      // merge-join row i with x
      auto a = data_[i].begin();
      auto b = x.begin();
      while (a != data_[i].end() && b != x.end()) {
        if (a->first < b->first)
          ++a;
        else if (b->first < a->first)
          ++b;
        else {
          acc += a->second * b->second;
          ++a;
          ++b;
        }
      }
      if (!acc.is_zero()) out.emplace_back(i, std::move(acc));
    }
    return SparseVector::from_entries(std::move(out));
  }

  SparseMatrix multiply(const SparseMatrix& other) const {
    if (cols_ != other.rows_) throw std::invalid_argument("matrix product dimension mismatch");
    SparseMatrix out(rows_, other.cols_);
    for (std::size_t i = 0; i < rows_; ++i) {
      std::map<std::size_t, Scalar> acc;
      for (const auto& [k, a] : data_[i])
        for (const auto& [j, b] : other.data_[k]) acc[j] += a * b;
      std::vector<SparseVector::Entry> e;
      for (auto& [j, v] : acc)
        if (!v.is_zero()) e.emplace_back(j, v);
      out.data_[i] = SparseVector::from_entries(std::move(e));
    }
    return out;
  }

  SparseMatrix transpose() const {
    std::vector<std::vector<SparseVector::Entry>> buckets(cols_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (const auto& [j, v] : data_[i]) buckets[j].emplace_back(i, v);
    SparseMatrix t(cols_, rows_);
    for (std::size_t j = 0; j < cols_; ++j) t.data_[j] = SparseVector::from_entries(std::move(buckets[j]));
    return t;
  }

  /// Restriction to a subset of columns (in the given order).
  SparseMatrix select_columns(const std::vector<std::size_t>& keep) const {
    std::vector<std::size_t> remap(cols_, static_cast<std::size_t>(-1));
    for (std::size_t k = 0; k < keep.size(); ++k) remap.at(keep[k]) = k;
    SparseMatrix out(rows_, keep.size());
    for (std::size_t i = 0; i < rows_; ++i) {
      std::vector<SparseVector::Entry> e;
      for (const auto& [j, v] : data_[i])
        if (remap[j] != static_cast<std::size_t>(-1)) e.emplace_back(remap[j], v);
      out.data_[i] = SparseVector::from_entries(std::move(e));
    }
    return out;
  }

  SparseMatrix select_rows(const std::vector<std::size_t>& keep) const {
    SparseMatrix out(keep.size(), cols_);
    for (std::size_t k = 0; k < keep.size(); ++k) out.data_[k] = data_.at(keep[k]);
    return out;
  }

  /// Matrix whose columns are the given vectors.
  static SparseMatrix from_columns(std::size_t rows, const std::vector<SparseVector>& columns) {
    std::vector<std::tuple<std::size_t, std::size_t, Scalar>> t;
    for (std::size_t j = 0; j < columns.size(); ++j)
      for (const auto& [i, v] : columns[j]) t.emplace_back(i, j, v);
    return from_triplets(rows, columns.size(), t);
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<SparseVector> data_;
};

namespace detail {

/// Divides a rational row by the gcd of its numerators after clearing
/// denominators, so stored pivot rows are primitive integer vectors.
inline void make_primitive(SparseVector& v) {
  if (v.empty()) return;
  for (const auto& [i, c] : v)
    if (!c.is_rational()) return;
  mpz_class lcm_den = 1;
  for (const auto& [i, c] : v) mpz_lcm(lcm_den.get_mpz_t(), lcm_den.get_mpz_t(), c.rational().get_den_mpz_t());
  mpz_class g = 0;
  for (const auto& [i, c] : v) {
    mpz_class n = c.rational().get_num() * (lcm_den / c.rational().get_den());
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), n.get_mpz_t());
  }
  if (v.entries().front().second.rational() < 0) g = -g;
  mpq_class factor(lcm_den, g);
  factor.canonicalize();
  if (factor == 1) return;
  for (auto& [i, c] : v.mutable_entries()) c = Scalar(mpq_class(c.rational() * factor));
}

inline void make_monic(SparseVector& v) {
  if (v.empty()) return;
  Scalar inv = Scalar(1) / v.entries().front().second;
  if (inv.is_one()) return;
  for (auto& [i, c] : v.mutable_entries()) c *= inv;
}

}  // namespace detail

/// Incremental row echelon form.
///
/// Rows are reduced as they arrive; the pivot of a stored row is its first
/// nonzero column, so the pivot choice is the first nonzero entry in
/// row-major order. Over Q the elimination is fraction-free: a row is
/// combined as p*v - v_c*P and then divided by its content, which keeps
/// intermediate entries integral and small. Over F_p rows are kept monic.
class RowEchelon {
 public:
  explicit RowEchelon(std::size_t cols, Field field = Field::rationals()) : cols_(cols), field_(field) {}

  std::size_t rank() const { return rows_.size(); }
  std::size_t cols() const { return cols_; }

  /// Reduces v against the stored rows; returns the residue.
  SparseVector reduce(SparseVector v) const {
    if (!field_.is_rational()) v = coerced(std::move(v));
    std::size_t pos = 0;
    while (pos < v.size()) {
      std::size_t col = v.entries()[pos].first;
      auto it = pivot_of_.find(col);
      if (it == pivot_of_.end()) {
        ++pos;
        continue;
      }
      const SparseVector& p = rows_[it->second];
      const Scalar& pc = p.entries().front().second;
      Scalar vc = v.entries()[pos].second;
      if (pc.is_one())
        v = v.axpy(-vc, p);
      else
        v = SparseVector::linear_combination(pc, v, -vc, p);
      detail::make_primitive(v);
      // entries before `pos` are untouched since p starts at `col`
    }
    return v;
  }

  /// Adds a row; returns true if it increased the rank.
  bool add(SparseVector v) {
    v = reduce(std::move(v));
    if (v.empty()) return false;
    normalize(v);
    pivot_of_[v.entries().front().first] = rows_.size();
    rows_.push_back(std::move(v));
    return true;
  }

  bool in_span(const SparseVector& v) const { return reduce(v).empty(); }

  /// Pivot columns, increasing.
  std::vector<std::size_t> pivot_columns() const {
    std::vector<std::size_t> out;
    for (const auto& [c, r] : pivot_of_) out.push_back(c);
    return out;
  }

  /// Fully reduced, monic rows keyed by pivot column.
  std::map<std::size_t, SparseVector> reduced_rows() const {
    std::map<std::size_t, SparseVector> out;
    // back-substitute from the last pivot upward
    for (auto it = pivot_of_.rbegin(); it != pivot_of_.rend(); ++it) {
      SparseVector v = rows_[it->second];
      std::size_t pos = 1;
      while (pos < v.size()) {
        std::size_t col = v.entries()[pos].first;
        auto r = out.find(col);
        if (r == out.end()) {
          ++pos;
          continue;
        }
        // r->second is monic with pivot col and no other pivot columns
        v = v.axpy(-v.entries()[pos].second, r->second);
      }
      detail::make_monic(v);
      out.emplace(it->first, std::move(v));
    }
    return out;
  }

 private:
  void normalize(SparseVector& v) const {
    if (v.entries().front().second.is_rational())
      detail::make_primitive(v);
    else
      detail::make_monic(v);
  }

  // constants such as +-1 enter as rationals; map them into F_p up front
  SparseVector coerced(SparseVector v) const {
    bool clean = true;
    for (const auto& [i, c] : v)
      if (c.is_rational()) clean = false;
    if (clean) return v;
    std::vector<SparseVector::Entry> e;
    for (const auto& [i, c] : v) e.emplace_back(i, field_.coerce(c));
    return SparseVector::from_entries(std::move(e));
  }

  std::size_t cols_;
  Field field_;
  std::vector<SparseVector> rows_;
  std::map<std::size_t, std::size_t> pivot_of_;
};

inline std::size_t rank(const SparseMatrix& m, const Field& field = Field::rationals()) {
  RowEchelon e(m.cols(), field);
  for (std::size_t i = 0; i < m.rows(); ++i) e.add(m.row(i));
  return e.rank();
}

/// Rank of a family of vectors living in a space of dimension `dim`.
inline std::size_t rank_of(const std::vector<SparseVector>& vectors, std::size_t dim,
                           const Field& field = Field::rationals()) {
  RowEchelon e(dim, field);
  for (const auto& v : vectors) e.add(v);
  return e.rank();
}

/// Basis of the null space; cols - rank(m) vectors, each exactly annihilated.
inline std::vector<SparseVector> kernel_basis(const SparseMatrix& m, const Field& field = Field::rationals()) {
  RowEchelon e(m.cols(), field);
  for (std::size_t i = 0; i < m.rows(); ++i) e.add(m.row(i));
  auto reduced = e.reduced_rows();
  std::vector<bool> is_pivot(m.cols(), false);
  for (const auto& [c, r] : reduced) is_pivot[c] = true;
  // column f of the reduced rows, gathered per free column
  std::vector<std::vector<SparseVector::Entry>> free_entries(m.cols());
  for (const auto& [c, r] : reduced)
    for (const auto& [j, v] : r)
      if (j != c) free_entries[j].emplace_back(c, -v);
  std::vector<SparseVector> basis;
  for (std::size_t f = 0; f < m.cols(); ++f) {
    if (is_pivot[f]) continue;
    auto entries = std::move(free_entries[f]);
    entries.emplace_back(f, field.from_int(1));
    basis.push_back(SparseVector::from_entries(std::move(entries)));
  }
  return basis;
}

/// Some x with m*x = b, or nullopt when the system is inconsistent.
inline std::optional<SparseVector> solve(const SparseMatrix& m, const SparseVector& b,
                                         const Field& field = Field::rationals()) {
  if (!b.empty() && b.entries().back().first >= m.rows())
    throw std::invalid_argument("right-hand side longer than the row count");
  const std::size_t rhs = m.cols();
  RowEchelon e(m.cols() + 1, field);
  for (std::size_t i = 0; i < m.rows(); ++i) {
    SparseVector row = m.row(i);
    Scalar bi = b.at(i);
    if (!bi.is_zero()) row.mutable_entries().emplace_back(rhs, bi);
    e.add(std::move(row));
  }
  auto reduced = e.reduced_rows();
  if (reduced.count(rhs)) return std::nullopt;
  std::vector<SparseVector::Entry> x;
  for (const auto& [c, r] : reduced) {
    Scalar v = r.at(rhs);
    if (!v.is_zero()) x.emplace_back(c, v);
  }
  SparseVector sol = SparseVector::from_entries(std::move(x));
  if (!(m.multiply(sol) == b)) throw std::logic_error("solve: back-substitution check failed");
  return sol;
}

}  // namespace difop
