#pragma once

// Small (co)chain complexes for Hochschild (co)homology of E.
//
// A differential is described once, as a list of terms per "big" input
// (a_1 .. a_r ; x_{j_1} ^ .. ^ x_{j_s}):
//   cochains:  (d phi)(big)       = sum coeff * op(phi(other))
//   chains:    d(m (x) big)       = sum coeff * op(m) (x) other
// The two directions share the term list; only the meaning of each op on
// the coefficient changes (see apply_op).

#include "difop/combinatorics.hpp"
#include "difop/crossed_product.hpp"

#include <functional>
#include <limits>

namespace difop {

struct Input {
  /// A-bar basis keys (X complexes) or increasing V-indices (Z complexes)
  std::vector<AKey> word;
  /// increasing g-indices
  std::vector<std::size_t> wedge;

  std::size_t r() const { return word.size(); }
  std::size_t s() const { return wedge.size(); }
  std::size_t degree() const { return word.size() + wedge.size(); }
  friend auto operator<=>(const Input&, const Input&) = default;
};

enum class OpKind { Id, First, Last, Gen, AComm };

/// Action of a term on a coefficient value v.
///            cochains        chains
///   First    a v             v a
///   Last     v a             a v
///   Gen      v y - y v       y v - v y
///   AComm    a v - v a       v a - a v
struct Op {
  OpKind kind = OpKind::Id;
  AKey a = 0;
  std::size_t gen = 0;
};

struct Term {
  Scalar coeff;
  Input other;
  Op op;
  int level = 0;  // which d_l produced the term
};

enum class Side { Cochain, Chain };

class TermComplex {
 public:
  explicit TermComplex(std::shared_ptr<const CrossedProduct> e) : e_(std::move(e)) {}
  virtual ~TermComplex() = default;

  const CrossedProduct& algebra() const { return *e_; }
  std::shared_ptr<const CrossedProduct> algebra_ptr() const { return e_; }

  virtual std::vector<Term> terms(const Input& big) const = 0;
  virtual std::vector<Input> block_inputs(std::size_t r, std::size_t s) const = 0;
  virtual std::size_t max_r() const = 0;
  /// Upper bound for the filtration raise of any op.
  virtual int shift() const = 0;

  std::vector<Input> degree_inputs(std::size_t n) const {
    std::vector<Input> out;
    for (std::size_t s = 0; s <= std::min(n, e_->lie_dim()); ++s) {
      std::size_t r = n - s;
      if (r > max_r()) continue;
      auto b = block_inputs(r, s);
      out.insert(out.end(), b.begin(), b.end());
    }
    return out;
  }

 protected:
  /// (-1)^{i+j+r} [x_i, x_j] ^ rest, with 1-based i < j.
  void bracket_terms(const Input& big, const std::vector<AKey>& word, std::vector<Term>& out) const {
    const auto& lie = e_->lie();
    const std::size_t s = big.s();
    const int r = static_cast<int>(word.size());
    for (std::size_t i = 1; i <= s; ++i)
      for (std::size_t j = i + 1; j <= s; ++j) {
        const auto& br = lie.of(big.wedge[i - 1], big.wedge[j - 1]);
        for (const auto& [t, c] : br) {
          std::vector<std::size_t> w{t};
          for (std::size_t u = 1; u <= s; ++u)
            if (u != i && u != j) w.push_back(big.wedge[u - 1]);
          auto sign = normalize_wedge(w);
          if (!sign) continue;
          Scalar coeff = c * sign_of(static_cast<int>(i + j) + r) * Scalar(*sign);
          out.push_back({coeff, Input{word, std::move(w)}, Op{}, 1});
        }
      }
  }

  static std::vector<std::size_t> drop(const std::vector<std::size_t>& w, std::size_t i) {
    std::vector<std::size_t> out;
    for (std::size_t u = 0; u < w.size(); ++u)
      if (u != i) out.push_back(w[u]);
    return out;
  }

  static std::vector<std::size_t> drop2(const std::vector<std::size_t>& w, std::size_t i, std::size_t j) {
    std::vector<std::size_t> out;
    for (std::size_t u = 0; u < w.size(); ++u)
      if (u != i && u != j) out.push_back(w[u]);
    return out;
  }

  std::shared_ptr<const CrossedProduct> e_;
};

/// The complexes X_K^{rs}(M) = Hom_{K^e}(A-bar^r (x) g^s, M) and
/// X^K_{rs}(M) = (M (x) A-bar^r)/[-, K] (x) g^s.
class XComplex final : public TermComplex {
 public:
  using TermComplex::TermComplex;

  std::vector<Term> terms(const Input& big) const override {
    std::vector<Term> out;
    const auto& base = e_->base();
    const std::size_t r = big.r(), s = big.s();
    const auto& a = big.word;
    // d_0
    if (r >= 1) {
      out.push_back({Scalar(1), Input{{a.begin() + 1, a.end()}, big.wedge}, Op{OpKind::First, a[0], 0}, 0});
      for (std::size_t i = 1; i < r; ++i) {
        ACombo prod = base.bar_project(base.multiply(a[i - 1], a[i]));
        for (const auto& [k, c] : prod) {
          std::vector<AKey> w(a.begin(), a.begin() + static_cast<std::ptrdiff_t>(i - 1));
          w.push_back(k);
          w.insert(w.end(), a.begin() + static_cast<std::ptrdiff_t>(i + 1), a.end());
          out.push_back({c * sign_of(static_cast<int>(i)), Input{std::move(w), big.wedge}, Op{}, 0});
        }
      }
      out.push_back({sign_of(static_cast<int>(r)), Input{{a.begin(), a.end() - 1}, big.wedge},
                     Op{OpKind::Last, a[r - 1], 0}, 0});
    }
    // d_1
    for (std::size_t i = 1; i <= s; ++i) {
      const std::size_t x = big.wedge[i - 1];
      auto rest = drop(big.wedge, i - 1);
      Scalar sg = sign_of(static_cast<int>(i + r));
      out.push_back({sg, Input{a, rest}, Op{OpKind::Gen, 0, x}, 1});
      for (std::size_t h = 0; h < r; ++h) {
        ACombo der = base.bar_project(base.derive(x, a[h]));
        for (const auto& [k, c] : der) {
          auto w = a;
          w[h] = k;
          out.push_back({sg * c, Input{std::move(w), rest}, Op{}, 1});
        }
      }
    }
    bracket_terms(big, a, out);
    // d_2
    for (std::size_t i = 1; i <= s; ++i)
      for (std::size_t j = i + 1; j <= s; ++j) {
        ACombo fh = base.bar_project(e_->fhat(big.wedge[i - 1], big.wedge[j - 1]));
        if (fh.empty()) continue;
        auto rest = drop2(big.wedge, i - 1, j - 1);
        for (std::size_t h = 0; h <= r; ++h)
          for (const auto& [k, c] : fh) {
            std::vector<AKey> w(a.begin(), a.begin() + static_cast<std::ptrdiff_t>(h));
            w.push_back(k);
            w.insert(w.end(), a.begin() + static_cast<std::ptrdiff_t>(h), a.end());
            out.push_back({c * sign_of(static_cast<int>(i + j + h)), Input{std::move(w), rest}, Op{}, 2});
          }
      }
    return out;
  }

  std::vector<Input> block_inputs(std::size_t r, std::size_t s) const override {
    auto comp = e_->base().complement();
    std::vector<Input> out;
    for (const auto& wedge : subsets(e_->lie_dim(), s))
      for (const auto& w : words(comp.size(), r)) {
        Input in;
        for (std::size_t idx : w) in.word.push_back(comp[idx]);
        in.wedge = wedge;
        out.push_back(std::move(in));
      }
    std::sort(out.begin(), out.end());
    return out;
  }

  std::size_t max_r() const override { return std::numeric_limits<std::size_t>::max(); }

  int shift() const override {
    int sh = e_->lie_dim() > 0 ? 1 : 0;
    if (e_->base().is_finite())
      for (AKey a : e_->base().complement()) sh = std::max(sh, e_->base().degree(a));
    return sh;
  }
};

// ---------------------------------------------------------------------------
// Coefficient actions

inline Element apply_op(const CrossedProduct& e, const Op& op, const Element& v, Side side) {
  const Scalar one = e.field().from_int(1);
  auto left_mult = [&](const Element& p) { return e.multiply(p, v); };
  auto right_mult = [&](const Element& p) { return e.multiply(v, p); };
  switch (op.kind) {
    case OpKind::Id: return v;
    case OpKind::First: {
      Element a = e.from_a(op.a, one);
      return side == Side::Cochain ? left_mult(a) : right_mult(a);
    }
    case OpKind::Last: {
      Element a = e.from_a(op.a, one);
      return side == Side::Cochain ? right_mult(a) : left_mult(a);
    }
    case OpKind::Gen: {
      Element y = e.generator(op.gen);
      Element c = right_mult(y) - left_mult(y);
      return side == Side::Cochain ? c : -c;
    }
    case OpKind::AComm: {
      Element a = e.from_a(op.a, one);
      Element c = left_mult(a) - right_mult(a);
      return side == Side::Cochain ? c : -c;
    }
  }
  return {};
}

inline SparseMatrix op_matrix(const BimoduleSpec& m, const Op& op, Side side) {
  switch (op.kind) {
    case OpKind::Id: return SparseMatrix::identity(m.dim);
    case OpKind::First: return side == Side::Cochain ? m.left_algebra.at(op.a) : m.right_algebra.at(op.a);
    case OpKind::Last: return side == Side::Cochain ? m.right_algebra.at(op.a) : m.left_algebra.at(op.a);
    case OpKind::Gen: {
      auto c = detail::mat_sub(m.right_lie.at(op.gen), m.left_lie.at(op.gen));
      return side == Side::Cochain ? c : detail::mat_sub(SparseMatrix(m.dim, m.dim), c);
    }
    case OpKind::AComm: {
      auto c = detail::mat_sub(m.left_algebra.at(op.a), m.right_algebra.at(op.a));
      return side == Side::Cochain ? c : detail::mat_sub(SparseMatrix(m.dim, m.dim), c);
    }
  }
  return {};
}

// ---------------------------------------------------------------------------
// Finite-dimensional coefficients

struct DegreeIndex {
  std::vector<Input> inputs;
  std::map<Input, std::size_t> pos;

  DegreeIndex() = default;
  explicit DegreeIndex(std::vector<Input> in) : inputs(std::move(in)) {
    for (std::size_t i = 0; i < inputs.size(); ++i) pos.emplace(inputs[i], i);
  }
  std::size_t size() const { return inputs.size(); }
};

/// Enumerated basis of one block of cochains: K = k gives tuples
/// (input, M-basis index); general K gives the kernel of the K^e-linearity
/// constraints inside that space.
struct CochainSpace {
  std::size_t r = 0, s = 0;
  std::vector<Input> inputs;
  std::size_t module_dim = 0;
  bool relative = false;
  std::vector<SparseVector> kernel;  // only when relative

  std::size_t ambient_dim() const { return inputs.size() * module_dim; }
  std::size_t dimension() const { return relative ? kernel.size() : ambient_dim(); }
};

namespace detail {

inline const FiniteAlgebra* finite_base(const TermComplex& tc) {
  return dynamic_cast<const FiniteAlgebra*>(&tc.algebra().base());
}

inline bool is_relative(const TermComplex& tc) {
  auto* fa = finite_base(tc);
  return fa && !fa->subalgebra().ground_field && dynamic_cast<const XComplex*>(&tc);
}

inline ACombo k_times(const FiniteAlgebra& fa, const SparseVector& lambda, AKey a) {
  return fa.bar_project(fa.multiply(combo_from_vector(lambda), ACombo{{a, fa.field().from_int(1)}}));
}

inline ACombo times_k(const FiniteAlgebra& fa, AKey a, const SparseVector& lambda) {
  return fa.bar_project(fa.multiply(ACombo{{a, fa.field().from_int(1)}}, combo_from_vector(lambda)));
}

/// Constraint rows cutting Hom_{K^e} out of Hom_k, for one block. Coordinates
/// are (input position) * dim M + module index within `block`.
inline std::vector<SparseVector> cochain_constraints(const FiniteAlgebra& fa, const BimoduleSpec& m,
                                                     const DegreeIndex& block) {
  std::vector<SparseVector> rows;
  const std::size_t md = m.dim;
  auto coord = [&](const Input& in, std::size_t mu) { return block.pos.at(in) * md + mu; };
  for (const auto& in : block.inputs) {
    const std::size_t r = in.r();
    for (const auto& lambda : fa.k_basis()) {
      auto l_lambda = m.left_of(lambda);
      auto r_lambda = m.right_of(lambda);
      for (std::size_t mu = 0; mu < md; ++mu) {
        if (r == 0) {
          // lambda phi(x) = phi(x) lambda
          std::vector<SparseVector::Entry> e;
          for (const auto& [nu, c] : l_lambda.row(mu)) e.emplace_back(coord(in, nu), c);
          for (const auto& [nu, c] : r_lambda.row(mu)) e.emplace_back(coord(in, nu), -c);
          rows.push_back(SparseVector::from_entries(std::move(e)));
          continue;
        }
        {  // lambda phi(a_1 ..) = phi(lambda a_1 ..)
          std::vector<SparseVector::Entry> e;
          for (const auto& [nu, c] : l_lambda.row(mu)) e.emplace_back(coord(in, nu), c);
          for (const auto& [k, c] : k_times(fa, lambda, in.word[0])) {
            Input w = in;
            w.word[0] = k;
            e.emplace_back(coord(w, mu), -c);
          }
          rows.push_back(SparseVector::from_entries(std::move(e)));
        }
        {  // phi(.. a_r) lambda = phi(.. a_r lambda)
          std::vector<SparseVector::Entry> e;
          for (const auto& [nu, c] : r_lambda.row(mu)) e.emplace_back(coord(in, nu), c);
          for (const auto& [k, c] : times_k(fa, in.word[r - 1], lambda)) {
            Input w = in;
            w.word[r - 1] = k;
            e.emplace_back(coord(w, mu), -c);
          }
          rows.push_back(SparseVector::from_entries(std::move(e)));
        }
        for (std::size_t i = 0; i + 1 < r; ++i) {  // phi(.. a_i lambda (x) a_{i+1} ..) = phi(.. a_i (x) lambda a_{i+1} ..)
          std::vector<SparseVector::Entry> e;
          for (const auto& [k, c] : times_k(fa, in.word[i], lambda)) {
            Input w = in;
            w.word[i] = k;
            e.emplace_back(coord(w, mu), c);
          }
          for (const auto& [k, c] : k_times(fa, lambda, in.word[i + 1])) {
            Input w = in;
            w.word[i + 1] = k;
            e.emplace_back(coord(w, mu), -c);
          }
          rows.push_back(SparseVector::from_entries(std::move(e)));
        }
      }
    }
  }
  return rows;
}

/// Spanning vectors of [M (x) A-bar^r, K] plus the tensor balancing over K,
/// for one block; coordinates as in cochain_constraints.
inline std::vector<SparseVector> chain_relations(const FiniteAlgebra& fa, const BimoduleSpec& m,
                                                 const DegreeIndex& block) {
  std::vector<SparseVector> rows;
  const std::size_t md = m.dim;
  auto coord = [&](const Input& in, std::size_t mu) { return block.pos.at(in) * md + mu; };
  for (const auto& in : block.inputs) {
    const std::size_t r = in.r();
    for (const auto& lambda : fa.k_basis()) {
      auto l_lambda = m.left_of(lambda);
      auto r_lambda = m.right_of(lambda);
      for (std::size_t nu = 0; nu < md; ++nu) {
        // column nu of a module matrix, as (row, value) pairs
        auto column = [&](const SparseMatrix& mat) {
          std::vector<std::pair<std::size_t, Scalar>> col;
          for (std::size_t row = 0; row < md; ++row) {
            Scalar v = mat.at(row, nu);
            if (!v.is_zero()) col.emplace_back(row, v);
          }
          return col;
        };
        if (r == 0) {
          // m lambda - lambda m
          std::vector<SparseVector::Entry> e;
          for (const auto& [mu, c] : column(r_lambda)) e.emplace_back(coord(in, mu), c);
          for (const auto& [mu, c] : column(l_lambda)) e.emplace_back(coord(in, mu), -c);
          rows.push_back(SparseVector::from_entries(std::move(e)));
          continue;
        }
        {  // m lambda (x) a_1 .. - m (x) lambda a_1 ..
          std::vector<SparseVector::Entry> e;
          for (const auto& [mu, c] : column(r_lambda)) e.emplace_back(coord(in, mu), c);
          for (const auto& [k, c] : k_times(fa, lambda, in.word[0])) {
            Input w = in;
            w.word[0] = k;
            e.emplace_back(coord(w, nu), -c);
          }
          rows.push_back(SparseVector::from_entries(std::move(e)));
        }
        {  // m (x) .. a_r lambda - lambda m (x) .. a_r
          std::vector<SparseVector::Entry> e;
          for (const auto& [k, c] : times_k(fa, in.word[r - 1], lambda)) {
            Input w = in;
            w.word[r - 1] = k;
            e.emplace_back(coord(w, nu), c);
          }
          for (const auto& [mu, c] : column(l_lambda)) e.emplace_back(coord(in, mu), -c);
          rows.push_back(SparseVector::from_entries(std::move(e)));
        }
        for (std::size_t i = 0; i + 1 < r; ++i) {
          std::vector<SparseVector::Entry> e;
          for (const auto& [k, c] : times_k(fa, in.word[i], lambda)) {
            Input w = in;
            w.word[i] = k;
            e.emplace_back(coord(w, nu), c);
          }
          for (const auto& [k, c] : k_times(fa, lambda, in.word[i + 1])) {
            Input w = in;
            w.word[i + 1] = k;
            e.emplace_back(coord(w, nu), -c);
          }
          rows.push_back(SparseVector::from_entries(std::move(e)));
        }
      }
    }
  }
  return rows;
}

/// Shifts every index of v by `offset`.
inline SparseVector shifted(const SparseVector& v, std::size_t offset) {
  std::vector<SparseVector::Entry> e;
  for (const auto& [i, c] : v) e.emplace_back(i + offset, c);
  return SparseVector::from_entries(std::move(e));
}

}  // namespace detail

inline CochainSpace enumerate_cochain_basis(const TermComplex& tc, std::size_t r, std::size_t s,
                                            const BimoduleSpec& m) {
  if (m.regular) throw std::invalid_argument("REGULAR coefficients have no finite cochain basis");
  CochainSpace cs;
  cs.r = r;
  cs.s = s;
  cs.module_dim = m.dim;
  if (s <= tc.algebra().lie_dim() && r <= tc.max_r()) cs.inputs = tc.block_inputs(r, s);
  if (detail::is_relative(tc)) {
    cs.relative = true;
    DegreeIndex block(cs.inputs);
    auto rows = detail::cochain_constraints(*detail::finite_base(tc), m, block);
    SparseMatrix c(rows.size(), cs.ambient_dim());
    for (std::size_t i = 0; i < rows.size(); ++i) c.set_row(i, rows[i]);
    cs.kernel = kernel_basis(c, tc.algebra().field());
  }
  return cs;
}

/// D^n : C^{n-1} -> C^n (cochains) or D_n : C_n -> C_{n-1} (chains), over
/// the k-level spaces (input, module index). `level` >= 0 keeps only d_level.
inline SparseMatrix assemble(const TermComplex& tc, const BimoduleSpec& m, Side side, std::size_t n, int level = -1) {
  if (m.regular) throw std::invalid_argument("assemble needs finite-dimensional coefficients");
  const std::size_t md = m.dim;
  DegreeIndex big(tc.degree_inputs(n));
  DegreeIndex small(n == 0 ? std::vector<Input>{} : tc.degree_inputs(n - 1));
  const std::size_t big_dim = big.size() * md, small_dim = small.size() * md;
  std::vector<std::tuple<std::size_t, std::size_t, Scalar>> trip;
  std::map<std::tuple<int, AKey, std::size_t>, SparseMatrix> cache;
  for (std::size_t b = 0; b < big.size(); ++b)
    for (const auto& t : tc.terms(big.inputs[b])) {
      if (level >= 0 && t.level != level) continue;
      auto it = small.pos.find(t.other);
      if (it == small.pos.end()) throw std::logic_error("term leaves the enumerated basis");
      auto key = std::make_tuple(static_cast<int>(t.op.kind), t.op.a, t.op.gen);
      auto mit = cache.find(key);
      if (mit == cache.end()) mit = cache.emplace(key, op_matrix(m, t.op, side)).first;
      const SparseMatrix& om = mit->second;
      for (std::size_t mu = 0; mu < md; ++mu)
        for (const auto& [nu, c] : om.row(mu)) {
          Scalar v = t.coeff * c;
          if (side == Side::Cochain)
            trip.emplace_back(b * md + mu, it->second * md + nu, v);
          else  // chains: source (big, nu) -> target (other, mu)
            trip.emplace_back(it->second * md + mu, b * md + nu, v);
        }
    }
  if (side == Side::Cochain) return SparseMatrix::from_triplets(big_dim, small_dim, trip);
  return SparseMatrix::from_triplets(small_dim, big_dim, trip);
}

/// Basis of the relative cochain space in total degree n, as vectors in the
/// k-level coordinates; for K = k this is the standard basis.
inline std::vector<SparseVector> cochain_basis_vectors(const TermComplex& tc, const BimoduleSpec& m, std::size_t n) {
  std::vector<SparseVector> out;
  std::size_t offset = 0;
  for (std::size_t s = 0; s <= std::min(n, tc.algebra().lie_dim()); ++s) {
    std::size_t r = n - s;
    if (r > tc.max_r()) continue;
    auto cs = enumerate_cochain_basis(tc, r, s, m);
    if (cs.relative)
      for (const auto& v : cs.kernel) out.push_back(detail::shifted(v, offset));
    else
      for (std::size_t i = 0; i < cs.ambient_dim(); ++i) out.push_back(SparseVector::unit(offset + i, tc.algebra().field().from_int(1)));
    offset += cs.ambient_dim();
  }
  return out;
}

/// Relation vectors in total degree n (empty for K = k).
inline std::vector<SparseVector> chain_relation_vectors(const TermComplex& tc, const BimoduleSpec& m, std::size_t n) {
  std::vector<SparseVector> out;
  if (!detail::is_relative(tc)) return out;
  std::size_t offset = 0;
  for (std::size_t s = 0; s <= std::min(n, tc.algebra().lie_dim()); ++s) {
    std::size_t r = n - s;
    DegreeIndex block(tc.block_inputs(r, s));
    for (const auto& v : detail::chain_relations(*detail::finite_base(tc), m, block))
      out.push_back(detail::shifted(v, offset));
    offset += block.size() * m.dim;
  }
  return out;
}

namespace detail {

inline std::vector<SparseVector> image_of(const SparseMatrix& d, const std::vector<SparseVector>& basis) {
  std::vector<SparseVector> out;
  out.reserve(basis.size());
  for (const auto& v : basis) out.push_back(d.multiply(v));
  return out;
}

inline std::vector<SparseVector> columns_of(const SparseMatrix& d) {
  auto t = d.transpose();
  std::vector<SparseVector> out;
  for (std::size_t i = 0; i < t.rows(); ++i) out.push_back(t.row(i));
  return out;
}

}  // namespace detail

/// dim H^n for 0 <= n <= n_max.
inline std::vector<std::size_t> betti_cohomology(const TermComplex& tc, const BimoduleSpec& m, std::size_t n_max) {
  std::vector<std::size_t> dims, ranks;  // ranks[n] = rank D^n restricted, D^0 = 0
  for (std::size_t n = 0; n <= n_max + 1; ++n) {
    auto basis = cochain_basis_vectors(tc, m, n);
    dims.push_back(basis.size());
    if (n == 0) {
      ranks.push_back(0);
      continue;
    }
    auto prev = cochain_basis_vectors(tc, m, n - 1);
    auto d = assemble(tc, m, Side::Cochain, n);
    ranks.push_back(rank_of(detail::image_of(d, prev), d.rows(), tc.algebra().field()));
  }
  std::vector<std::size_t> out;
  for (std::size_t n = 0; n <= n_max; ++n) out.push_back(dims[n] - ranks[n + 1] - ranks[n]);
  return out;
}

/// dim H_n for 0 <= n <= n_max.
inline std::vector<std::size_t> betti_homology(const TermComplex& tc, const BimoduleSpec& m, std::size_t n_max) {
  std::vector<std::size_t> quotient_dims, ranks;  // ranks[n] = rank of induced D_n, D_0 = 0
  std::vector<std::size_t> rel_ranks;
  for (std::size_t n = 0; n <= n_max + 1; ++n) {
    auto rel = chain_relation_vectors(tc, m, n);
    std::size_t ambient = tc.degree_inputs(n).size() * m.dim;
    std::size_t rr = rank_of(rel, ambient, tc.algebra().field());
    rel_ranks.push_back(rr);
    quotient_dims.push_back(ambient - rr);
    if (n == 0) {
      ranks.push_back(0);
      continue;
    }
    auto d = assemble(tc, m, Side::Chain, n);
    auto vecs = detail::columns_of(d);
    auto rel_prev = chain_relation_vectors(tc, m, n - 1);
    vecs.insert(vecs.end(), rel_prev.begin(), rel_prev.end());
    ranks.push_back(rank_of(vecs, d.rows(), tc.algebra().field()) - rel_ranks[n - 1]);
  }
  std::vector<std::size_t> out;
  for (std::size_t n = 0; n <= n_max; ++n) out.push_back(quotient_dims[n] - ranks[n] - ranks[n + 1]);
  return out;
}

// ---------------------------------------------------------------------------
// Coefficients in E itself

/// A cochain with values in E, given as a function on inputs of one total
/// degree. Inputs outside its support evaluate to 0.
using Cochain = std::function<Element(const Input&)>;

/// Finitely supported chain with coefficients in E.
using Chain = std::map<Input, Element>;

inline Cochain table_cochain(std::map<Input, Element> table) {
  auto t = std::make_shared<std::map<Input, Element>>(std::move(table));
  return [t](const Input& in) {
    auto it = t->find(in);
    return it == t->end() ? Element{} : it->second;
  };
}

/// d(phi); the complex must outlive the returned function.
inline Cochain coboundary(const TermComplex& tc, Cochain phi) {
  const TermComplex* c = &tc;
  return [c, phi = std::move(phi)](const Input& big) {
    Element out;
    for (const auto& t : c->terms(big)) {
      Element v = phi(t.other);
      if (v.is_zero()) continue;
      out.add(apply_op(c->algebra(), t.op, v, Side::Cochain), t.coeff);
    }
    return out;
  };
}

inline Chain boundary(const TermComplex& tc, const Chain& ch) {
  Chain out;
  for (const auto& [big, m] : ch) {
    if (m.is_zero()) continue;
    for (const auto& t : tc.terms(big)) {
      Element v = apply_op(tc.algebra(), t.op, m, Side::Chain).scaled(t.coeff);
      if (v.is_zero()) continue;
      out[t.other] += v;
    }
  }
  for (auto it = out.begin(); it != out.end();)
    it = it->second.is_zero() ? out.erase(it) : std::next(it);
  return out;
}

inline void chain_add(Chain& into, const Chain& other, const Scalar& c = 1) {
  for (const auto& [in, v] : other) {
    into[in].add(v, c);
    if (into[in].is_zero()) into.erase(in);
  }
}

// ---------------------------------------------------------------------------
// d o d with coefficients in E, checked in E (x) E^op: every op is a sum of
// v -> P v Q, so the composite is zero on all bimodules (in particular on E)
// once the symbolic sum of P (x) Q vanishes. This is the free bimodule case.

using OpTensor = std::map<std::pair<Monomial, Monomial>, Scalar>;

namespace detail {

inline std::vector<std::tuple<Scalar, Element, Element>> op_pairs(const CrossedProduct& e, const Op& op, Side side) {
  const Scalar one = e.field().from_int(1);
  Element u = e.one();
  Element a = op.kind == OpKind::First || op.kind == OpKind::Last || op.kind == OpKind::AComm ? e.from_a(op.a, one) : u;
  Element y = op.kind == OpKind::Gen ? e.generator(op.gen) : u;
  const bool co = side == Side::Cochain;
  switch (op.kind) {
    case OpKind::Id: return {{one, u, u}};
    case OpKind::First: return co ? std::vector<std::tuple<Scalar, Element, Element>>{{one, a, u}}
                                  : std::vector<std::tuple<Scalar, Element, Element>>{{one, u, a}};
    case OpKind::Last: return co ? std::vector<std::tuple<Scalar, Element, Element>>{{one, u, a}}
                                 : std::vector<std::tuple<Scalar, Element, Element>>{{one, a, u}};
    case OpKind::Gen: return {{co ? one : -one, u, y}, {co ? -one : one, y, u}};
    case OpKind::AComm: return {{co ? one : -one, a, u}, {co ? -one : one, u, a}};
  }
  return {};
}

inline void tensor_add(OpTensor& t, const Element& p, const Element& q, const Scalar& c) {
  for (const auto& [mp, cp] : p)
    for (const auto& [mq, cq] : q) {
      auto key = std::make_pair(mp, mq);
      auto it = t.find(key);
      Scalar v = c * cp * cq;
      if (it == t.end()) {
        if (!v.is_zero()) t.emplace(key, v);
      } else {
        it->second += v;
        if (it->second.is_zero()) t.erase(it);
      }
    }
}

}  // namespace detail

struct DdDefect {
  Input source;
  Input target;
  OpTensor tensor;
};

/// Cochains: (d d phi)(big) for every big input of degree n; chains:
/// d d (m (x) big). Returns the (big, final input) pairs where the symbolic
/// composite does not vanish.
inline std::vector<DdDefect> regular_dd_defects(const TermComplex& tc, Side side, std::size_t n) {
  const auto& e = tc.algebra();
  std::vector<DdDefect> out;
  for (const auto& big : tc.degree_inputs(n)) {
    std::map<Input, OpTensor> acc;
    for (const auto& t1 : tc.terms(big))
      for (const auto& t2 : tc.terms(t1.other)) {
        const Op& outer = side == Side::Cochain ? t1.op : t2.op;
        const Op& inner = side == Side::Cochain ? t2.op : t1.op;
        for (const auto& [co, po, qo] : detail::op_pairs(e, outer, side))
          for (const auto& [ci, pi, qi] : detail::op_pairs(e, inner, side))
            detail::tensor_add(acc[t2.other], e.multiply(po, pi), e.multiply(qi, qo), t1.coeff * t2.coeff * co * ci);
      }
    for (auto& [target, tensor] : acc)
      if (!tensor.empty()) out.push_back({big, target, std::move(tensor)});
  }
  return out;
}

// ---------------------------------------------------------------------------
// Truncated (co)homology with coefficients in E

/// PBW monomials of filtration degree <= cap.
inline std::vector<Monomial> monomials_up_to(const CrossedProduct& e, int cap) {
  if (cap < 0) throw std::invalid_argument("cap too small to contain the unit");
  std::vector<AKey> a_keys;
  if (auto* fa = dynamic_cast<const FiniteAlgebra*>(&e.base())) {
    for (std::size_t i = 0; i < fa->dim(); ++i) a_keys.push_back(i);
  } else {
    a_keys = dynamic_cast<const PolynomialAlgebra&>(e.base()).monomials_up_to(static_cast<unsigned>(cap));
  }
  std::vector<Monomial> out;
  for (AKey a : a_keys) {
    int room = cap - e.base().degree(a);
    if (room < 0) continue;
    // exponent vectors of total degree <= room
    std::vector<GExp> gs{0};
    std::vector<GExp> frontier{0};
    for (int d = 1; d <= room; ++d) {
      std::vector<GExp> next;
      for (GExp g : frontier) {
        int top = pexp::max_index(g);
        for (std::size_t t = static_cast<std::size_t>(std::max(top, 0)); t < e.lie_dim(); ++t) next.push_back(pexp::inc(g, t));
      }
      gs.insert(gs.end(), next.begin(), next.end());
      frontier = std::move(next);
    }
    for (GExp g : gs) out.push_back(Monomial{a, g});
  }
  std::sort(out.begin(), out.end());
  return out;
}

struct TruncationReport {
  Side side = Side::Cochain;
  int shift = 0;
  std::vector<int> caps;
  /// [degree][cap index]
  std::vector<std::vector<std::size_t>> kernel, boundary, residual, lower_bound;
  std::vector<bool> stable;
};

namespace detail {

/// Coordinates (input, monomial) allocated on demand.
class CoordIndex {
 public:
  std::size_t of(const Input& in, const Monomial& m, int filtration) {
    auto key = std::make_pair(in, m);
    auto it = pos_.find(key);
    if (it != pos_.end()) return it->second;
    std::size_t id = filt_.size();
    pos_.emplace(std::move(key), id);
    filt_.push_back(filtration);
    return id;
  }
  int filtration(std::size_t id) const { return filt_[id]; }
  std::size_t size() const { return filt_.size(); }

 private:
  std::map<std::pair<Input, Monomial>, std::size_t> pos_;
  std::vector<int> filt_;
};

/// Images of the basis vectors (input, monomial) under the differential
/// leaving degree `from`, for all monomials of filtration <= cap.
inline std::vector<SparseVector> truncated_images(const TermComplex& tc, Side side, std::size_t from, int cap,
                                                  CoordIndex& target) {
  const auto& e = tc.algebra();
  auto monos = monomials_up_to(e, cap);
  // terms grouped by the source input
  std::map<Input, std::vector<std::pair<Input, Term>>> by_source;
  if (side == Side::Cochain) {
    for (const auto& big : tc.degree_inputs(from + 1))
      for (auto& t : tc.terms(big)) by_source[t.other].emplace_back(big, t);
  } else if (from > 0) {
    for (const auto& big : tc.degree_inputs(from))
      for (auto& t : tc.terms(big)) by_source[big].emplace_back(t.other, t);
  }
  std::vector<SparseVector> out;
  for (const auto& src : tc.degree_inputs(from)) {
    auto it = by_source.find(src);
    for (const auto& mono : monos) {
      std::vector<SparseVector::Entry> entries;
      if (it != by_source.end()) {
        Element v = Element::monomial(mono.a, mono.g, e.field().from_int(1));
        for (const auto& [dst, t] : it->second) {
          Element img = apply_op(e, t.op, v, side);
          for (const auto& [m, c] : img)
            entries.emplace_back(target.of(dst, m, e.filtration_degree(m)), c * t.coeff);
        }
      }
      out.push_back(SparseVector::from_entries(std::move(entries)));
    }
  }
  return out;
}

}  // namespace detail

/// For each degree n <= n_max and each cap c:
///   kernel   = dim ker(d) on (co)chains valued in filtration <= c
///   boundary = dim of the (co)boundaries of (co)chains valued in
///              filtration <= c + shift that land in filtration <= c
///   residual = kernel - boundary
/// lower_bound is the running maximum of the residual over the caps, and a
/// degree is flagged stable when its residual agrees at the last two caps.
inline TruncationReport truncated_betti(const TermComplex& tc, Side side, std::size_t n_max, std::vector<int> caps) {
  if (caps.empty()) throw std::invalid_argument("no caps given");
  for (int c : caps)
    if (c < 0) throw std::invalid_argument("cap too small to contain the unit");
  TruncationReport rep;
  rep.side = side;
  rep.shift = tc.shift();
  rep.caps = caps;
  const std::size_t nd = n_max + 1;
  rep.kernel.assign(nd, {});
  rep.boundary.assign(nd, {});
  rep.residual.assign(nd, {});
  rep.lower_bound.assign(nd, {});
  rep.stable.assign(nd, false);
  const auto& e = tc.algebra();
  for (std::size_t n = 0; n <= n_max; ++n) {
    for (int cap : caps) {
      std::size_t space = tc.degree_inputs(n).size() * monomials_up_to(e, cap).size();
      // kernel of the outgoing differential
      std::size_t rk = 0;
      if (side == Side::Cochain || n > 0) {
        detail::CoordIndex out_idx;
        auto imgs = detail::truncated_images(tc, side, n, cap, out_idx);
        rk = rank_of(imgs, out_idx.size(), e.field());
      }
      std::size_t ker = space - rk;
      // incoming (co)boundaries landing in filtration <= cap
      std::size_t bnd = 0;
      bool has_incoming = side == Side::Cochain ? n > 0 : true;
      if (has_incoming) {
        detail::CoordIndex in_idx;
        std::size_t from = side == Side::Cochain ? n - 1 : n + 1;
        auto imgs = detail::truncated_images(tc, side, from, cap + rep.shift, in_idx);
        std::size_t total = rank_of(imgs, in_idx.size(), e.field());
        std::vector<SparseVector> outside;
        for (const auto& v : imgs) {
          std::vector<SparseVector::Entry> ent;
          for (const auto& [i, c] : v)
            if (in_idx.filtration(i) > cap) ent.emplace_back(i, c);
          outside.push_back(SparseVector::from_entries(std::move(ent)));
        }
        bnd = total - rank_of(outside, in_idx.size(), e.field());
      }
      rep.kernel[n].push_back(ker);
      rep.boundary[n].push_back(bnd);
      std::size_t res = ker - bnd;
      rep.residual[n].push_back(res);
      std::size_t lb = rep.lower_bound[n].empty() ? res : std::max(rep.lower_bound[n].back(), res);
      rep.lower_bound[n].push_back(lb);
    }
    const auto& r = rep.residual[n];
    rep.stable[n] = r.size() >= 2 && r[r.size() - 1] == r[r.size() - 2];
  }
  return rep;
}

}  // namespace difop
