#pragma once

// Comparison with the normalized bar complex on special tensors (entries in
// A-bar or generators 1#g_i), bar-level cup and cap, and two independent
// oracles: the Chevalley-Eilenberg complex of g and the normalized bar
// complex of a finite-dimensional A.

#include "difop/products.hpp"

namespace difop {

struct BarEntry {
  bool gen = false;
  std::uint64_t id = 0;  // A-key or generator index
  friend auto operator<=>(const BarEntry&, const BarEntry&) = default;
};

using SpecialTensor = std::vector<BarEntry>;

inline BarEntry a_entry(AKey a) { return {false, a}; }
inline BarEntry g_entry(std::size_t i) { return {true, i}; }

/// Generators first, strictly increasing, then A-entries only.
inline bool is_ordered_special(const SpecialTensor& t) {
  std::size_t p = 0;
  while (p < t.size() && t[p].gen) {
    if (p > 0 && t[p - 1].id >= t[p].id) return false;
    ++p;
  }
  for (; p < t.size(); ++p)
    if (t[p].gen) return false;
  return true;
}

inline std::size_t leading_generators(const SpecialTensor& t) {
  std::size_t p = 0;
  while (p < t.size() && t[p].gen) ++p;
  return p;
}

/// Throws unless every A-entry is a class in A-bar (a complement key) and
/// every generator index exists.
inline void check_special(const CrossedProduct& e, const SpecialTensor& t) {
  for (const auto& c : t) {
    if (c.gen) {
      if (c.id >= e.lie_dim()) throw std::invalid_argument("generator index out of range in special tensor");
      continue;
    }
    ACombo p = e.base().bar_project(c.id);
    if (p.size() != 1 || p.begin()->first != c.id || !p.begin()->second.is_one())
      throw std::invalid_argument("special tensor entry is not an A-bar basis class");
  }
}

template <class V>
struct BarCochain {
  std::size_t degree = 0;
  std::function<V(const SpecialTensor&)> eval;
};

template <class V>
using BarChain = std::map<SpecialTensor, V>;

/// All (s, r) shuffles of gens into a: positions of the generators and sign.
inline std::vector<std::pair<SpecialTensor, int>> shuffle_product(const SpecialTensor& gens, const SpecialTensor& as) {
  std::vector<std::pair<SpecialTensor, int>> out;
  const std::size_t s = gens.size(), n = gens.size() + as.size();
  for (const auto& pos : subsets(n, s)) {
    SpecialTensor t(n);
    std::vector<bool> taken(n, false);
    for (std::size_t u = 0; u < s; ++u) {
      t[pos[u]] = gens[u];
      taken[pos[u]] = true;
    }
    std::size_t q = 0;
    for (std::size_t p = 0; p < n; ++p)
      if (!taken[p]) t[p] = as[q++];
    out.emplace_back(std::move(t), parity_sign(shuffle_exponent(pos)));
  }
  return out;
}

namespace detail {

/// sum_tau sg(tau) (1#x_tau(1) (x) ... ) * a_{1r}, with (-1)^{rs} folded in.
inline std::vector<std::pair<SpecialTensor, int>> theta_terms(const Input& in) {
  SpecialTensor as;
  for (AKey a : in.word) as.push_back(a_entry(a));
  const int base = parity_sign(static_cast<int>(in.r() * in.s()));
  std::vector<std::pair<SpecialTensor, int>> out;
  for (const auto& [tau, sg] : permutations_with_sign(in.s())) {
    SpecialTensor gens;
    for (std::size_t i : tau) gens.push_back(g_entry(in.wedge[i]));
    for (auto& [t, sh] : shuffle_product(gens, as)) out.emplace_back(std::move(t), base * sg * sh);
  }
  return out;
}

/// c = (gens increasing, then A) -> (A-part, wedge); nullopt off the ordered domain.
inline std::optional<Input> ordered_input(const SpecialTensor& t) {
  if (!is_ordered_special(t)) return std::nullopt;
  Input in;
  const std::size_t s = leading_generators(t);
  for (std::size_t p = 0; p < t.size(); ++p) {
    if (p < s)
      in.wedge.push_back(static_cast<std::size_t>(t[p].id));
    else
      in.word.push_back(t[p].id);
  }
  return in;
}

}  // namespace detail

/// theta(psi)(a_{1r} (x) x_{1s}) = sum_tau (-1)^{rs} sg(tau) psi((1#x_tau) * a_{1r})
template <class V>
V theta_bar(const BarCochain<V>& psi, const Input& in) {
  V out{};
  for (const auto& [t, sg] : detail::theta_terms(in)) add_scaled(out, psi.eval(t), Scalar(sg));
  return out;
}

template <class V>
CochainOf<V> theta_bar_cochain(BarCochain<V> psi) {
  return [psi = std::move(psi)](const Input& in) { return theta_bar(psi, in); };
}

/// vartheta(phi)(c) = (-1)^{rs} phi(c_{s+1,r+s} (x) g_{i_1} ^ .. ^ g_{i_s}) on
/// ordered special tensors, 0 on the other special tensors.
template <class V>
BarCochain<V> vartheta_bar(std::shared_ptr<const CrossedProduct> e, CochainOf<V> phi, std::size_t degree) {
  return {degree, [e, phi = std::move(phi), degree](const SpecialTensor& t) {
            if (t.size() != degree) throw std::invalid_argument("special tensor has the wrong length");
            check_special(*e, t);
            auto in = detail::ordered_input(t);
            if (!in) return V{};
            V v = phi(*in);
            if (in->r() * in->s() % 2 == 1) {
              V z{};
              add_scaled(z, v, Scalar(-1));
              return z;
            }
            return v;
          }};
}

/// Chain direction: m (x) a (x) x -> sum (-1)^{rs} sg(tau) m (x) (1#x_tau) * a.
template <class V>
BarChain<V> theta_chain(const ChainOf<V>& c) {
  BarChain<V> out;
  for (const auto& [in, m] : c)
    for (const auto& [t, sg] : detail::theta_terms(in)) {
      auto& slot = out[t];
      add_scaled(slot, m, Scalar(sg));
      if (value_is_zero(slot)) out.erase(t);
    }
  return out;
}

/// m (x) c_{1n} -> (-1)^{s(n-s)} m (x) c_{s+1,n} (x) g_{i_1} ^ .. on ordered
/// special tensors, 0 on the others.
template <class V>
ChainOf<V> vartheta_chain(const CrossedProduct& e, const BarChain<V>& c) {
  ChainOf<V> out;
  for (const auto& [t, m] : c) {
    check_special(e, t);
    auto in = detail::ordered_input(t);
    if (!in) continue;
    const std::size_t s = in->s(), n = t.size();
    chain_accumulate(out, *in, m, Scalar(parity_sign(static_cast<int>(s * (n - s)))));
  }
  return out;
}

/// (psi u psi')(c_{1,m+n}) = psi(c_{1m}) psi'(c_{m+1,m+n})
inline BarCochain<Element> bar_cup(std::shared_ptr<const CrossedProduct> e, const BarCochain<Element>& psi,
                                   const BarCochain<Element>& psi2) {
  const std::size_t m = psi.degree, n = psi2.degree;
  auto f = psi.eval, g = psi2.eval;
  return {m + n, [e, m, n, f, g](const SpecialTensor& t) {
            if (t.size() != m + n) throw std::invalid_argument("bar_cup: length mismatch");
            Element a = f(SpecialTensor(t.begin(), t.begin() + static_cast<std::ptrdiff_t>(m)));
            if (a.is_zero()) return Element{};
            Element b = g(SpecialTensor(t.begin() + static_cast<std::ptrdiff_t>(m), t.end()));
            return e->multiply(a, b);
          }};
}

inline Element bar_cup_eval(std::shared_ptr<const CrossedProduct> e, const BarCochain<Element>& psi,
                            const BarCochain<Element>& psi2, const SpecialTensor& t) {
  return bar_cup(std::move(e), psi, psi2).eval(t);
}

/// (m (x) c_{1p}) cap psi = m psi(c_{1q}) (x) c_{q+1,p}
template <class V, class RightAction>
BarChain<V> bar_cap(const BarChain<V>& c, const BarCochain<Element>& psi, RightAction act) {
  BarChain<V> out;
  const std::size_t q = psi.degree;
  for (const auto& [t, m] : c) {
    if (t.size() < q) throw std::invalid_argument("bar_cap: degree underflow");
    Element val = psi.eval(SpecialTensor(t.begin(), t.begin() + static_cast<std::ptrdiff_t>(q)));
    if (val.is_zero()) continue;
    SpecialTensor tail(t.begin() + static_cast<std::ptrdiff_t>(q), t.end());
    V v = act(m, val);
    auto& slot = out[tail];
    add_scaled(slot, v, Scalar(1));
    if (value_is_zero(slot)) out.erase(tail);
  }
  return out;
}

inline BarChain<Element> bar_cap(std::shared_ptr<const CrossedProduct> e, const BarChain<Element>& c,
                                 const BarCochain<Element>& psi) {
  return bar_cap<Element>(c, psi, [e](const Element& m, const Element& u) { return e->multiply(m, u); });
}

/// All special tensors of length n over the given A-bar keys and all generators.
inline std::vector<SpecialTensor> special_tensors(const std::vector<AKey>& abar, std::size_t lie_dim, std::size_t n) {
  std::vector<BarEntry> alphabet;
  for (AKey a : abar) alphabet.push_back(a_entry(a));
  for (std::size_t i = 0; i < lie_dim; ++i) alphabet.push_back(g_entry(i));
  std::vector<SpecialTensor> out;
  for (const auto& w : words(alphabet.size(), n)) {
    SpecialTensor t;
    for (std::size_t i : w) t.push_back(alphabet[i]);
    out.push_back(std::move(t));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Chevalley-Eilenberg oracle (trivial coefficients k), written directly on
// exterior powers without the term machinery above.
//
// Basis of C^n = (g^n)^*: increasing n-subsets, lexicographic. The small
// complex for A = k, f = 0, M = k orders its inputs the same way, and its d_1
// restricted there is (-1)^{i+j} phi([x_i, x_j] ^ ...), which is exactly the
// CE differential below; the per-degree sign alignment is the identity.

namespace ce {

inline std::map<std::vector<std::size_t>, std::size_t> index_of(std::size_t d, std::size_t n) {
  std::map<std::vector<std::size_t>, std::size_t> idx;
  for (const auto& s : subsets(d, n)) idx.emplace(s, idx.size());
  return idx;
}

/// Wedge [x_a, x_b] ^ rest expanded in the basis: pairs (subset, coeff).
inline std::vector<std::pair<std::vector<std::size_t>, Scalar>> bracket_wedge(const LieAlgebraSpec& g, std::size_t a,
                                                                             std::size_t b,
                                                                             const std::vector<std::size_t>& rest) {
  std::vector<std::pair<std::vector<std::size_t>, Scalar>> out;
  for (const auto& [t, c] : g.of(a, b)) {
    if (std::find(rest.begin(), rest.end(), t) != rest.end()) continue;
    std::vector<std::size_t> w = rest;
    // insert t at the front and count transpositions to sort it in
    std::size_t pos = 0;
    while (pos < w.size() && w[pos] < t) ++pos;
    w.insert(w.begin() + static_cast<std::ptrdiff_t>(pos), t);
    out.emplace_back(std::move(w), pos % 2 ? -c : c);
  }
  return out;
}

/// d : C^{n-1} -> C^n, (d phi)(x_1..x_n) = sum_{i<j} (-1)^{i+j} phi([x_i,x_j], x_1..^i..^j..x_n)
inline SparseMatrix cochain_matrix(const LieAlgebraSpec& g, std::size_t n, const Field& field) {
  auto rows = index_of(g.dim, n);
  auto cols = n == 0 ? std::map<std::vector<std::size_t>, std::size_t>{} : index_of(g.dim, n - 1);
  std::vector<std::tuple<std::size_t, std::size_t, Scalar>> trip;
  for (const auto& [w, ri] : rows)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) {
        std::vector<std::size_t> rest;
        for (std::size_t u = 0; u < n; ++u)
          if (u != i && u != j) rest.push_back(w[u]);
        Scalar sg = ((i + j) % 2) ? Scalar(-1) : Scalar(1);
        for (const auto& [sub, c] : bracket_wedge(g, w[i], w[j], rest))
          trip.emplace_back(ri, cols.at(sub), field.coerce(sg * c));
      }
  return SparseMatrix::from_triplets(rows.size(), cols.size(), trip);
}

/// d : C_n -> C_{n-1}, x_1 ^ .. ^ x_n -> sum_{i<j} (-1)^{i+j} [x_i,x_j] ^ ..^i..^j..
inline SparseMatrix chain_matrix(const LieAlgebraSpec& g, std::size_t n, const Field& field) {
  return cochain_matrix(g, n, field).transpose();
}

inline std::vector<std::size_t> betti_from_ranks(const std::vector<std::size_t>& dims, const std::vector<std::size_t>& ranks) {
  // ranks[n] = rank of the map between degrees n-1 and n (ranks[0] = 0)
  std::vector<std::size_t> out;
  for (std::size_t n = 0; n + 1 < dims.size(); ++n) out.push_back(dims[n] - ranks[n] - ranks[n + 1]);
  return out;
}

}  // namespace ce

/// dim H^n(g, k) for n <= n_max.
inline std::vector<std::size_t> ce_oracle_betti(const LieAlgebraSpec& g, std::size_t n_max,
                                                const Field& field = Field::rationals()) {
  std::vector<std::size_t> dims, ranks{0};
  for (std::size_t n = 0; n <= n_max + 1; ++n) {
    dims.push_back(binomial(g.dim, n));
    if (n > 0) ranks.push_back(rank(ce::cochain_matrix(g, n, field), field));
  }
  return ce::betti_from_ranks(dims, ranks);
}

/// dim H_n(g, k); equal to the cohomology numbers over a field, computed
/// from the transposed matrices.
inline std::vector<std::size_t> ce_oracle_homology_betti(const LieAlgebraSpec& g, std::size_t n_max,
                                                         const Field& field = Field::rationals()) {
  std::vector<std::size_t> dims, ranks{0};
  for (std::size_t n = 0; n <= n_max + 1; ++n) {
    dims.push_back(binomial(g.dim, n));
    if (n > 0) ranks.push_back(rank(ce::chain_matrix(g, n, field), field));
  }
  return ce::betti_from_ranks(dims, ranks);
}

// ---------------------------------------------------------------------------
// Normalized bar oracle for finite-dimensional A over k.
//
// A-bar is spanned by the basis vectors other than the unit (the unit must
// be a basis vector); projection drops the unit coordinate. Words over A-bar
// are ordered lexicographically, module coordinates innermost, matching the
// layout of the small complex when g = 0 and K = k; the sign alignment is
// the identity.

namespace bar {

struct Layout {
  std::vector<std::size_t> abar;  // A-basis indices spanning A-bar
  std::size_t md = 0;

  std::size_t words(std::size_t n) const {
    std::size_t w = 1;
    for (std::size_t i = 0; i < n; ++i) w *= abar.size();
    return w;
  }
  std::size_t dim(std::size_t n) const { return words(n) * md; }
  /// lexicographic rank of a word of positions into abar
  std::size_t word_index(const std::vector<std::size_t>& w) const {
    std::size_t idx = 0;
    for (std::size_t p : w) idx = idx * abar.size() + p;
    return idx;
  }
};

inline Layout layout(const AlgebraSpec& a, const BimoduleSpec& m) {
  Layout l;
  for (std::size_t i = 0; i < a.dim; ++i)
    if (i != a.unit) l.abar.push_back(i);
  l.md = m.dim;
  return l;
}

/// a_i a_j projected to A-bar, as (position in abar, coeff).
inline std::vector<std::pair<std::size_t, Scalar>> product_bar(const AlgebraSpec& a, const Layout& l, std::size_t i,
                                                               std::size_t j) {
  std::vector<std::pair<std::size_t, Scalar>> out;
  for (const auto& [k, c] : a.product(l.abar[i], l.abar[j])) {
    if (k == a.unit) continue;
    auto it = std::find(l.abar.begin(), l.abar.end(), k);
    out.emplace_back(static_cast<std::size_t>(it - l.abar.begin()), c);
  }
  return out;
}

/// b : C^{n-1} -> C^n
///   (b phi)(a_1..a_n) = a_1 phi(a_2..) + sum_i (-1)^i phi(..a_i a_{i+1}..) + (-1)^n phi(a_1..a_{n-1}) a_n
inline SparseMatrix cochain_matrix(const AlgebraSpec& a, const BimoduleSpec& m, std::size_t n, const Field& field) {
  Layout l = layout(a, m);
  std::vector<std::tuple<std::size_t, std::size_t, Scalar>> trip;
  if (n == 0) return SparseMatrix(l.dim(0), 0);
  for (const auto& w : difop::words(l.abar.size(), n)) {
    const std::size_t row_word = l.word_index(w);
    auto put = [&](const std::vector<std::size_t>& src, const SparseMatrix& op, const Scalar& c) {
      const std::size_t col_word = l.word_index(src);
      for (std::size_t mu = 0; mu < l.md; ++mu)
        for (const auto& [nu, x] : op.row(mu)) trip.emplace_back(row_word * l.md + mu, col_word * l.md + nu, field.coerce(c * x));
    };
    put({w.begin() + 1, w.end()}, m.left_algebra.at(l.abar[w[0]]), Scalar(1));
    auto ident = SparseMatrix::identity(l.md);
    for (std::size_t i = 1; i < n; ++i)
      for (const auto& [k, c] : product_bar(a, l, w[i - 1], w[i])) {
        std::vector<std::size_t> src(w.begin(), w.begin() + static_cast<std::ptrdiff_t>(i - 1));
        src.push_back(k);
        src.insert(src.end(), w.begin() + static_cast<std::ptrdiff_t>(i + 1), w.end());
        put(src, ident, (i % 2 ? Scalar(-1) : Scalar(1)) * c);
      }
    put({w.begin(), w.end() - 1}, m.right_algebra.at(l.abar[w[n - 1]]), n % 2 ? Scalar(-1) : Scalar(1));
  }
  return SparseMatrix::from_triplets(l.dim(n), l.dim(n - 1), trip);
}

/// b : C_n -> C_{n-1}
///   b(m (x) a_1..a_n) = m a_1 (x) a_2.. + sum_i (-1)^i m (x) ..a_i a_{i+1}.. + (-1)^n a_n m (x) a_1..a_{n-1}
inline SparseMatrix chain_matrix(const AlgebraSpec& a, const BimoduleSpec& m, std::size_t n, const Field& field) {
  Layout l = layout(a, m);
  std::vector<std::tuple<std::size_t, std::size_t, Scalar>> trip;
  if (n == 0) return SparseMatrix(0, l.dim(0));
  for (const auto& w : difop::words(l.abar.size(), n)) {
    const std::size_t src_word = l.word_index(w);
    auto put = [&](const std::vector<std::size_t>& dst, const SparseMatrix& op, const Scalar& c) {
      const std::size_t dst_word = l.word_index(dst);
      for (std::size_t mu = 0; mu < l.md; ++mu)
        for (const auto& [nu, x] : op.row(mu)) trip.emplace_back(dst_word * l.md + mu, src_word * l.md + nu, field.coerce(c * x));
    };
    put({w.begin() + 1, w.end()}, m.right_algebra.at(l.abar[w[0]]), Scalar(1));
    auto ident = SparseMatrix::identity(l.md);
    for (std::size_t i = 1; i < n; ++i)
      for (const auto& [k, c] : product_bar(a, l, w[i - 1], w[i])) {
        std::vector<std::size_t> dst(w.begin(), w.begin() + static_cast<std::ptrdiff_t>(i - 1));
        dst.push_back(k);
        dst.insert(dst.end(), w.begin() + static_cast<std::ptrdiff_t>(i + 1), w.end());
        put(dst, ident, (i % 2 ? Scalar(-1) : Scalar(1)) * c);
      }
    put({w.begin(), w.end() - 1}, m.left_algebra.at(l.abar[w[n - 1]]), n % 2 ? Scalar(-1) : Scalar(1));
  }
  return SparseMatrix::from_triplets(l.dim(n - 1), l.dim(n), trip);
}

}  // namespace bar

inline std::vector<std::size_t> bar_oracle_betti(const AlgebraSpec& a, const BimoduleSpec& m, std::size_t n_max,
                                                 const Field& field = Field::rationals()) {
  auto l = bar::layout(a, m);
  std::vector<std::size_t> dims, ranks{0};
  for (std::size_t n = 0; n <= n_max + 1; ++n) {
    dims.push_back(l.dim(n));
    if (n > 0) ranks.push_back(rank(bar::cochain_matrix(a, m, n, field), field));
  }
  return ce::betti_from_ranks(dims, ranks);
}

inline std::vector<std::size_t> bar_oracle_homology_betti(const AlgebraSpec& a, const BimoduleSpec& m,
                                                          std::size_t n_max, const Field& field = Field::rationals()) {
  auto l = bar::layout(a, m);
  std::vector<std::size_t> dims, ranks{0};
  for (std::size_t n = 0; n <= n_max + 1; ++n) {
    dims.push_back(l.dim(n));
    if (n > 0) ranks.push_back(rank(bar::chain_matrix(a, m, n, field), field));
  }
  return ce::betti_from_ranks(dims, ranks);
}

}  // namespace difop
