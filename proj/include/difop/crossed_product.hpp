#pragma once

// Arithmetic in E = A #_f U(g) on the PBW basis a # g_1^{e_1} ... g_d^{e_d}.
//
// Writing y_i = 1 # g_i, E is generated by A and the y_i subject to
//   y_i a = a y_i + a^{g_i}
//   y_i y_j = y_j y_i + [g_i, g_j] + fhat_ij        (i > j)
// where fhat_ij = f(g_i, g_j) - f(g_j, g_i) in A.

#include "difop/base_algebra.hpp"

#include <mutex>
#include <sstream>
#include <unordered_map>

namespace difop {

/// Packed g-exponents; same layout as S(V) keys.
using GExp = std::uint64_t;

struct Monomial {
  AKey a = 0;
  GExp g = 0;
  friend auto operator<=>(const Monomial&, const Monomial&) = default;
};

/// Finitely supported combination of PBW monomials.
class Element {
 public:
  using Map = std::map<Monomial, Scalar>;

  Element() = default;

  static Element monomial(AKey a, GExp g, Scalar c = 1) {
    Element e;
    e.add(Monomial{a, g}, c);
    return e;
  }

  void add(const Monomial& m, const Scalar& c) {
    if (c.is_zero()) return;
    auto [it, inserted] = terms_.emplace(m, c);
    if (!inserted) {
      it->second += c;
      if (it->second.is_zero()) terms_.erase(it);
    }
  }

  void add(const Element& other, const Scalar& factor = 1) {
    if (factor.is_zero()) return;
    for (const auto& [m, c] : other.terms_) add(m, c * factor);
  }

  Element scaled(const Scalar& c) const {
    Element out;
    if (c.is_zero()) return out;
    for (const auto& [m, v] : terms_) out.terms_.emplace(m, v * c);
    return out;
  }

  Element& operator+=(const Element& o) {
    add(o);
    return *this;
  }
  Element& operator-=(const Element& o) {
    add(o, Scalar(-1));
    return *this;
  }
  friend Element operator+(Element a, const Element& b) { return a += b; }
  friend Element operator-(Element a, const Element& b) { return a -= b; }
  Element operator-() const { return scaled(Scalar(-1)); }

  bool is_zero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }
  auto begin() const { return terms_.begin(); }
  auto end() const { return terms_.end(); }
  const Map& terms() const { return terms_; }

  Scalar coefficient(const Monomial& m) const {
    auto it = terms_.find(m);
    return it == terms_.end() ? Scalar(0) : it->second;
  }

  friend bool operator==(const Element& a, const Element& b) {
    if (a.terms_.size() != b.terms_.size()) return false;
    auto i = a.terms_.begin();
    auto j = b.terms_.begin();
    for (; i != a.terms_.end(); ++i, ++j)
      if (!(i->first == j->first) || i->second != j->second) return false;
    return true;
  }
  friend bool operator!=(const Element& a, const Element& b) { return !(a == b); }

 private:
  Map terms_;
};

/// E together with its multiplication.
///
/// Products are computed from two memoized tables:
///   L(e, b) = y^e b          (moving an A-element left through generators)
///   R(e, k) = y^e y_k        (appending one generator, reordering)
/// Both tables are filled lazily under a mutex, so a CrossedProduct can be
/// shared between threads.
class CrossedProduct {
 public:
  CrossedProduct(std::shared_ptr<const BaseAlgebra> base, LieAlgebraSpec lie, std::vector<std::vector<ACombo>> fhat)
      : base_(std::move(base)), lie_(std::move(lie)), fhat_(std::move(fhat)) {
    if (lie_.dim > pexp::kMaxVars) throw std::invalid_argument("at most 8 Lie generators supported");
    if (base_->lie_dim() != lie_.dim) throw std::invalid_argument("action and Lie algebra disagree on dim g");
    if (fhat_.size() != lie_.dim) throw std::invalid_argument("cocycle table has the wrong size");
    for (auto& row : lie_.bracket)
      for (auto& v : row) {
        for (auto& [i, c] : v.mutable_entries()) c = field().coerce(c);
        v = SparseVector::from_entries(v.entries());
      }
  }

  /// Finite-dimensional A from declarative data.
  static std::shared_ptr<CrossedProduct> from_data(const AlgebraData& d) {
    auto base = std::make_shared<FiniteAlgebra>(d);
    std::vector<std::vector<ACombo>> fh(d.lie.dim, std::vector<ACombo>(d.lie.dim));
    for (std::size_t i = 0; i < d.lie.dim; ++i)
      for (std::size_t j = 0; j < d.lie.dim; ++j) {
        SparseVector v = d.cocycle.fhat(i, j);
        for (const auto& [k, c] : v) combo_add(fh[i][j], k, d.field.coerce(c));
      }
    return std::make_shared<CrossedProduct>(base, d.lie, std::move(fh));
  }

  const BaseAlgebra& base() const { return *base_; }
  std::shared_ptr<const BaseAlgebra> base_ptr() const { return base_; }
  const LieAlgebraSpec& lie() const { return lie_; }
  const Field& field() const { return base_->field(); }
  std::size_t lie_dim() const { return lie_.dim; }
  const ACombo& fhat(std::size_t i, std::size_t j) const { return fhat_.at(i).at(j); }

  Element one() const { return Element::monomial(base_->unit(), 0, field().from_int(1)); }
  Element from_a(AKey a, Scalar c = 1) const { return Element::monomial(a, 0, field().coerce(c)); }
  Element from_a(const ACombo& a) const {
    Element e;
    for (const auto& [k, c] : a) e.add(Monomial{k, 0}, c);
    return e;
  }
  /// y_i = 1 # g_i
  Element generator(std::size_t i) const { return Element::monomial(base_->unit(), pexp::unit(i), field().from_int(1)); }

  Element multiply(const Element& u, const Element& v) const {
    Element out;
    for (const auto& [mu, cu] : u)
      for (const auto& [mv, cv] : v) out.add(multiply_monomials(mu, mv), cu * cv);
    return out;
  }

  Element commutator(const Element& u, const Element& v) const { return multiply(u, v) - multiply(v, u); }

  /// a * u for a in A
  Element left_a(const ACombo& a, const Element& u) const {
    Element out;
    for (const auto& [m, c] : u)
      for (const auto& [ka, ca] : a)
        for (const auto& [k, e] : base_->multiply(ka, m.a)) out.add(Monomial{k, m.g}, c * ca * e);
    return out;
  }

  int filtration_degree(const Monomial& m) const {
    return static_cast<int>(pexp::total(m.g)) + base_->degree(m.a);
  }

  int filtration_degree(const Element& u) const {
    int d = 0;
    for (const auto& [m, c] : u) d = std::max(d, filtration_degree(m));
    return d;
  }

  /// e.g. "3·(ε)#x^2 - (1)#y"; monomials sorted by (degree, exponent).
  std::string render(const Element& u) const {
    if (u.is_zero()) return "0";
    std::vector<std::pair<Monomial, Scalar>> terms(u.begin(), u.end());
    std::stable_sort(terms.begin(), terms.end(), [&](const auto& x, const auto& y) {
      int dx = filtration_degree(x.first), dy = filtration_degree(y.first);
      if (dx != dy) return dx < dy;
      if (x.first.g != y.first.g) return exponent_less(x.first.g, y.first.g);
      return x.first.a < y.first.a;
    });
    std::ostringstream os;
    bool first = true;
    for (const auto& [m, c] : terms) {
      std::string coeff = c.str();
      bool negative = c.is_rational() && c.rational() < 0;
      if (negative) coeff = (-c).str();
      if (first)
        os << (negative ? "-" : "");
      else
        os << (negative ? " - " : " + ");
      first = false;
      if (coeff != "1") os << coeff << "·";
      os << "(" << base_->name(m.a) << ")#" << pexp::render(m.g, lie_.labels);
    }
    return os.str();
  }

  /// (a # y^e)(b # y^f)
  Element multiply_monomials(const Monomial& x, const Monomial& y) const {
    // a * (y^e b) * y^f
    Element moved = left_a(ACombo{{x.a, field().from_int(1)}}, move_left(x.g, y.a));
    for (std::size_t k = 0; k < lie_.dim; ++k)
      for (unsigned t = 0; t < pexp::get(y.g, k); ++t) moved = times_generator(moved, k);
    return moved;
  }

  /// u * y_k
  Element times_generator(const Element& u, std::size_t k) const {
    Element out;
    for (const auto& [m, c] : u) {
      if (pexp::max_index(m.g) <= static_cast<int>(k)) {
        out.add(Monomial{m.a, pexp::inc(m.g, k)}, c);
        continue;
      }
      out.add(left_a(ACombo{{m.a, field().from_int(1)}}, append(m.g, k)), c);
    }
    return out;
  }

  /// y^e b
  Element move_left(GExp e, AKey b) const {
    if (e == 0) return from_a(b, 1);
    {
      std::lock_guard<std::mutex> lock(mutex_);
      auto it = left_cache_.find(key(e, b));
      if (it != left_cache_.end()) return it->second;
    }
    auto k = static_cast<std::size_t>(pexp::max_index(e));
    GExp rest = pexp::dec(e, k);
    // y^e b = (y^{e-1_k} b) y_k + y^{e-1_k} b^{g_k}
    Element out = times_generator(move_left(rest, b), k);
    for (const auto& [c, coeff] : base_->derive(k, b)) out.add(move_left(rest, c), coeff);
    std::lock_guard<std::mutex> lock(mutex_);
    left_cache_.emplace(key(e, b), out);
    return out;
  }

  /// y^e y_k
  Element append(GExp e, std::size_t k) const {
    int top = pexp::max_index(e);
    if (top <= static_cast<int>(k)) return Element::monomial(base_->unit(), pexp::inc(e, k), field().from_int(1));
    {
      std::lock_guard<std::mutex> lock(mutex_);
      auto it = right_cache_.find(key(e, k));
      if (it != right_cache_.end()) return it->second;
    }
    auto m = static_cast<std::size_t>(top);
    GExp rest = pexp::dec(e, m);
    // y^e y_k = y^{rest} y_m y_k = (y^{rest} y_k) y_m + sum_t gamma_mk^t y^{rest} y_t + y^{rest} fhat_mk
    Element out = times_generator(append(rest, k), m);
    for (const auto& [t, c] : lie_.of(m, k)) out.add(append(rest, t), c);
    for (const auto& [a, c] : fhat(m, k)) out.add(move_left(rest, a), c);
    std::lock_guard<std::mutex> lock(mutex_);
    right_cache_.emplace(key(e, k), out);
    return out;
  }

 private:
  static bool exponent_less(GExp a, GExp b) {
    for (std::size_t i = 0; i < pexp::kMaxVars; ++i) {
      unsigned x = pexp::get(a, i), y = pexp::get(b, i);
      if (x != y) return x > y;  // x^2 before xy before y^2
    }
    return false;
  }

  struct PairHash {
    std::size_t operator()(const std::pair<std::uint64_t, std::uint64_t>& p) const {
      return std::hash<std::uint64_t>{}(p.first * 0x9e3779b97f4a7c15ull ^ p.second);
    }
  };
  static std::pair<std::uint64_t, std::uint64_t> key(std::uint64_t a, std::uint64_t b) { return {a, b}; }

  std::shared_ptr<const BaseAlgebra> base_;
  LieAlgebraSpec lie_;
  std::vector<std::vector<ACombo>> fhat_;
  mutable std::mutex mutex_;
  mutable std::unordered_map<std::pair<std::uint64_t, std::uint64_t>, Element, PairHash> left_cache_;
  mutable std::unordered_map<std::pair<std::uint64_t, std::uint64_t>, Element, PairHash> right_cache_;
};

}  // namespace difop
