#pragma once

// Coefficient algebras A for E = A #_f U(g): finite-dimensional algebras given
// by structure constants, and symmetric algebras S(V) with an affine action.

#include "difop/algebra_data.hpp"

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

namespace difop {

/// Key of an A-basis element: a basis index for finite A, packed exponents
/// (8 bits per variable) for S(V).
using AKey = std::uint64_t;

/// Linear combination of A-basis elements.
using ACombo = std::map<AKey, Scalar>;

inline void combo_add(ACombo& into, AKey k, const Scalar& c) {
  if (c.is_zero()) return;
  auto [it, inserted] = into.emplace(k, c);
  if (!inserted) {
    it->second += c;
    if (it->second.is_zero()) into.erase(it);
  }
}

inline ACombo combo_from_vector(const SparseVector& v) {
  ACombo out;
  for (const auto& [i, c] : v) out.emplace(static_cast<AKey>(i), c);
  return out;
}

class BaseAlgebra {
 public:
  virtual ~BaseAlgebra() = default;

  virtual const Field& field() const = 0;
  virtual AKey unit() const = 0;
  virtual ACombo multiply(AKey a, AKey b) const = 0;
  /// a^{g_i}
  virtual ACombo derive(std::size_t gen, AKey a) const = 0;
  virtual int degree(AKey a) const = 0;
  virtual std::string name(AKey a) const = 0;
  virtual bool is_finite() const = 0;
  virtual std::size_t lie_dim() const = 0;

  /// Basis of the fixed complement of K (finite A only).
  virtual std::vector<AKey> complement() const = 0;
  /// Class of a basis element in A/K, written in the complement basis.
  virtual ACombo bar_project(AKey a) const = 0;

  ACombo multiply(const ACombo& x, const ACombo& y) const {
    ACombo out;
    for (const auto& [a, c] : x)
      for (const auto& [b, d] : y)
        for (const auto& [k, e] : multiply(a, b)) combo_add(out, k, c * d * e);
    return out;
  }

  ACombo derive(std::size_t gen, const ACombo& x) const {
    ACombo out;
    for (const auto& [a, c] : x)
      for (const auto& [k, e] : derive(gen, a)) combo_add(out, k, c * e);
    return out;
  }

  ACombo bar_project(const ACombo& x) const {
    ACombo out;
    for (const auto& [a, c] : x)
      for (const auto& [k, e] : bar_project(a)) combo_add(out, k, c * e);
    return out;
  }
};

/// A given by structure constants, with a subalgebra K and the action.
class FiniteAlgebra final : public BaseAlgebra {
 public:
  FiniteAlgebra(Field field, AlgebraSpec spec, SubalgebraSpec sub, ActionSpec action)
      : field_(field), spec_(std::move(spec)), sub_(std::move(sub)), action_(std::move(action)) {
    coerce_all();
    build_complement();
  }

  explicit FiniteAlgebra(const AlgebraData& d) : FiniteAlgebra(d.field, d.algebra, d.subalgebra, d.action) {}

  const Field& field() const override { return field_; }
  AKey unit() const override { return spec_.unit; }

  ACombo multiply(AKey a, AKey b) const override { return combo_from_vector(spec_.product(a, b)); }
  using BaseAlgebra::multiply;

  ACombo derive(std::size_t gen, AKey a) const override {
    return combo_from_vector(action_.images.at(gen).at(a));
  }
  using BaseAlgebra::derive;

  int degree(AKey a) const override { return spec_.degree(a); }
  std::string name(AKey a) const override { return spec_.name(a); }
  bool is_finite() const override { return true; }
  std::size_t lie_dim() const override { return action_.images.size(); }

  std::vector<AKey> complement() const override { return complement_; }
  ACombo bar_project(AKey a) const override { return projection_.at(a); }
  using BaseAlgebra::bar_project;

  const AlgebraSpec& spec() const { return spec_; }
  const SubalgebraSpec& subalgebra() const { return sub_; }
  /// Basis of K (an independent subset of the given spanning set).
  const std::vector<SparseVector>& k_basis() const { return k_basis_; }
  std::size_t dim() const { return spec_.dim; }

 private:
  void coerce_all() {
    auto fix = [&](SparseVector& v) {
      for (auto& [i, c] : v.mutable_entries()) c = field_.coerce(c);
      v = SparseVector::from_entries(v.entries());
    };
    for (auto& row : spec_.products)
      for (auto& v : row) fix(v);
    for (auto& row : action_.images)
      for (auto& v : row) fix(v);
    for (auto& v : sub_.span) fix(v);
  }

  void build_complement() {
    const std::size_t n = spec_.dim;
    RowEchelon e(n, field_);
    for (const auto& v : sub_.spanning_set(spec_))
      if (e.add(v)) k_basis_.push_back(v);
    for (std::size_t j = 0; j < n; ++j)
      if (e.add(SparseVector::unit(j))) complement_.push_back(j);
    // columns: K basis, then complement unit vectors; invertible n x n
    std::vector<SparseVector> cols = k_basis_;
    for (AKey c : complement_) cols.push_back(SparseVector::unit(c));
    auto basis = SparseMatrix::from_columns(n, cols);
    projection_.resize(n);
    for (std::size_t j = 0; j < n; ++j) {
      auto x = solve(basis, SparseVector::unit(j, field_.from_int(1)), field_);
      if (!x) throw std::logic_error("complement of K does not span A");
      for (const auto& [idx, c] : *x)
        if (idx >= k_basis_.size()) combo_add(projection_[j], complement_[idx - k_basis_.size()], c);
    }
  }

  Field field_;
  AlgebraSpec spec_;
  SubalgebraSpec sub_;
  ActionSpec action_;
  std::vector<SparseVector> k_basis_;
  std::vector<AKey> complement_;
  std::vector<ACombo> projection_;
};

/// Packed exponent vectors: 8 bits per variable, at most 8 variables.
namespace pexp {

constexpr std::size_t kMaxVars = 8;
constexpr unsigned kMaxExponent = 255;

inline unsigned get(std::uint64_t e, std::size_t i) { return static_cast<unsigned>((e >> (8 * i)) & 0xffu); }

inline std::uint64_t unit(std::size_t i) { return std::uint64_t{1} << (8 * i); }

inline std::uint64_t inc(std::uint64_t e, std::size_t i) {
  if (get(e, i) == kMaxExponent) throw std::overflow_error("exponent exceeds 255");
  return e + unit(i);
}

inline std::uint64_t dec(std::uint64_t e, std::size_t i) {
  if (get(e, i) == 0) throw std::logic_error("negative exponent");
  return e - unit(i);
}

inline std::uint64_t add(std::uint64_t a, std::uint64_t b) {
  for (std::size_t i = 0; i < kMaxVars; ++i)
    if (get(a, i) + get(b, i) > kMaxExponent) throw std::overflow_error("exponent exceeds 255");
  return a + b;
}

inline unsigned total(std::uint64_t e) {
  unsigned t = 0;
  for (std::size_t i = 0; i < kMaxVars; ++i) t += get(e, i);
  return t;
}

/// Highest variable with a positive exponent, or -1.
inline int max_index(std::uint64_t e) {
  for (int i = static_cast<int>(kMaxVars) - 1; i >= 0; --i)
    if (get(e, static_cast<std::size_t>(i))) return i;
  return -1;
}

inline std::string render(std::uint64_t e, const std::vector<std::string>& labels) {
  std::string s;
  for (std::size_t i = 0; i < kMaxVars; ++i) {
    unsigned p = get(e, i);
    if (!p) continue;
    s += i < labels.size() ? labels[i] : "t" + std::to_string(i + 1);
    if (p > 1) s += "^" + std::to_string(p);
  }
  return s.empty() ? "1" : s;
}

}  // namespace pexp

/// S(V) with v^{x_i} = c_i(v) + w_i(v) in k + V.
class PolynomialAlgebra final : public BaseAlgebra {
 public:
  /// constant[i][t] and linear[i][t] give v_t^{x_i}.
  PolynomialAlgebra(Field field, std::size_t dim_v, std::vector<std::string> labels,
                    std::vector<std::vector<Scalar>> constant, std::vector<std::vector<SparseVector>> linear)
      : field_(field),
        dim_v_(dim_v),
        labels_(std::move(labels)),
        constant_(std::move(constant)),
        linear_(std::move(linear)) {
    if (dim_v_ > pexp::kMaxVars) throw std::invalid_argument("at most 8 variables supported");
    if (constant_.size() != linear_.size()) throw std::invalid_argument("action tables disagree on dim g");
    for (auto& row : constant_)
      for (auto& c : row) c = field_.coerce(c);
    for (auto& row : linear_)
      for (auto& v : row) {
        for (auto& [i, c] : v.mutable_entries()) c = field_.coerce(c);
        v = SparseVector::from_entries(v.entries());
      }
  }

  const Field& field() const override { return field_; }
  AKey unit() const override { return 0; }
  AKey variable(std::size_t t) const { return pexp::unit(t); }
  std::size_t dim_v() const { return dim_v_; }
  const std::vector<std::string>& labels() const { return labels_; }

  ACombo multiply(AKey a, AKey b) const override { return ACombo{{pexp::add(a, b), field_.from_int(1)}}; }
  using BaseAlgebra::multiply;

  ACombo derive(std::size_t gen, AKey a) const override {
    ACombo out;
    for (std::size_t t = 0; t < dim_v_; ++t) {
      unsigned e = pexp::get(a, t);
      if (!e) continue;
      AKey rest = pexp::dec(a, t);
      Scalar mult = field_.from_int(e);
      combo_add(out, rest, mult * constant_.at(gen).at(t));
      for (const auto& [u, c] : linear_.at(gen).at(t)) combo_add(out, pexp::add(rest, variable(u)), mult * c);
    }
    return out;
  }
  using BaseAlgebra::derive;

  int degree(AKey a) const override { return static_cast<int>(pexp::total(a)); }
  std::string name(AKey a) const override { return pexp::render(a, labels_); }
  bool is_finite() const override { return false; }
  std::size_t lie_dim() const override { return constant_.size(); }

  std::vector<AKey> complement() const override {
    throw std::logic_error("S(V) has no finite complement basis");
  }
  ACombo bar_project(AKey a) const override {
    if (a == 0) return {};
    return ACombo{{a, field_.from_int(1)}};
  }
  using BaseAlgebra::bar_project;

  /// V-component of v_t^{x_i}.
  const SparseVector& linear_part(std::size_t gen, std::size_t t) const { return linear_.at(gen).at(t); }
  const Scalar& constant_part(std::size_t gen, std::size_t t) const { return constant_.at(gen).at(t); }

  /// All monomials of total degree <= d.
  std::vector<AKey> monomials_up_to(unsigned d) const {
    std::vector<AKey> out{0};
    std::vector<AKey> frontier{0};
    for (unsigned deg = 1; deg <= d; ++deg) {
      std::vector<AKey> next;
      for (AKey m : frontier) {
        int top = pexp::max_index(m);
        for (std::size_t t = static_cast<std::size_t>(std::max(top, 0)); t < dim_v_; ++t) next.push_back(pexp::inc(m, t));
      }
      out.insert(out.end(), next.begin(), next.end());
      frontier = std::move(next);
    }
    return out;
  }

 private:
  Field field_;
  std::size_t dim_v_;
  std::vector<std::string> labels_;
  std::vector<std::vector<Scalar>> constant_;
  std::vector<std::vector<SparseVector>> linear_;
};

}  // namespace difop
