#pragma once

// E = S(V) #_f U(g) with affine action and affine cocycle: the smaller
// complexes Z built on V^r (exterior) instead of A-bar^r, the comparison
// Gamma with the X complexes, and the products on Z.

#include "difop/products.hpp"
#include "difop/rewriting.hpp"

namespace difop {

struct SymmetricModeSpec {
  Field field;
  std::size_t dim_v = 0;
  std::vector<std::string> v_labels;
  LieAlgebraSpec lie;
  /// v_t^{x_i} = act_const[i][t] + act_lin[i][t]
  std::vector<std::vector<Scalar>> act_const;
  std::vector<std::vector<SparseVector>> act_lin;
  /// f(x_i, x_j) = f_const[i][j] + f_lin[i][j]
  std::vector<std::vector<Scalar>> f_const;
  std::vector<std::vector<SparseVector>> f_lin;

  /// Fills zero action and cocycle tables for the current dimensions.
  void zero_tables() {
    act_const.assign(lie.dim, std::vector<Scalar>(dim_v, Scalar(0)));
    act_lin.assign(lie.dim, std::vector<SparseVector>(dim_v));
    f_const.assign(lie.dim, std::vector<Scalar>(lie.dim, Scalar(0)));
    f_lin.assign(lie.dim, std::vector<SparseVector>(lie.dim));
  }

  /// V-component of fhat_ij.
  SparseVector fhat_v(std::size_t i, std::size_t j) const { return f_lin.at(i).at(j).axpy(-1, f_lin.at(j).at(i)); }
  Scalar fhat_const(std::size_t i, std::size_t j) const { return f_const.at(i).at(j) - f_const.at(j).at(i); }
};

/// Dimension and index checks on the tables; empty iff well formed.
inline ValidationReport validate_symmetric_shape(const SymmetricModeSpec& s) {
  ValidationReport rep;
  const std::size_t d = s.lie.dim;
  auto bad = [&](const std::string& what, const std::string& where) { rep.push_back({what, where, "", ""}); };
  if (s.dim_v > pexp::kMaxVars) bad("dim-v", "at most 8 variables");
  if (s.act_const.size() != d || s.act_lin.size() != d) bad("action-shape", "one row per generator");
  if (s.f_const.size() != d || s.f_lin.size() != d) bad("cocycle-shape", "one row per generator");
  if (!rep.empty()) return rep;
  for (std::size_t i = 0; i < d; ++i) {
    if (s.act_const[i].size() != s.dim_v || s.act_lin[i].size() != s.dim_v) bad("action-shape", s.lie.label(i));
    if (s.f_const[i].size() != d || s.f_lin[i].size() != d) bad("cocycle-shape", s.lie.label(i));
  }
  if (!rep.empty()) return rep;
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t t = 0; t < s.dim_v; ++t)
      for (const auto& [u, c] : s.act_lin[i][t])
        if (u >= s.dim_v) bad("action-index", s.lie.label(i) + "," + std::to_string(t));
    for (std::size_t j = 0; j < d; ++j)
      for (const auto& [u, c] : s.f_lin[i][j])
        if (u >= s.dim_v) bad("cocycle-index", s.lie.label(i) + "," + s.lie.label(j));
  }
  return rep;
}

inline std::shared_ptr<CrossedProduct> build_symmetric(const SymmetricModeSpec& s) {
  auto shape = validate_symmetric_shape(s);
  if (!shape.empty()) throw std::invalid_argument("malformed symmetric data: " + shape.front().check + " at " + shape.front().witness);
  auto labels = s.v_labels;
  for (std::size_t t = labels.size(); t < s.dim_v; ++t) labels.push_back("v" + std::to_string(t + 1));
  auto base = std::make_shared<PolynomialAlgebra>(s.field, s.dim_v, labels, s.act_const, s.act_lin);
  const std::size_t d = s.lie.dim;
  std::vector<std::vector<ACombo>> fh(d, std::vector<ACombo>(d));
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) {
      combo_add(fh[i][j], 0, s.field.coerce(s.fhat_const(i, j)));
      for (const auto& [u, c] : s.fhat_v(i, j)) combo_add(fh[i][j], pexp::unit(u), s.field.coerce(c));
    }
  return std::make_shared<CrossedProduct>(base, s.lie, std::move(fh));
}

/// Shape, Lie algebra, the induced derivations on S(V) (Leibniz on monomials
/// up to degree `cap`) and confluence of the presentation.
inline ValidationReport validate_symmetric(const SymmetricModeSpec& s, unsigned cap = 4) {
  ValidationReport rep = validate_symmetric_shape(s);
  if (!rep.empty()) return rep;
  auto lie = validate_lie(s.lie);
  rep.insert(rep.end(), lie.begin(), lie.end());
  auto e = build_symmetric(s);
  const auto& pa = dynamic_cast<const PolynomialAlgebra&>(e->base());
  auto monos = pa.monomials_up_to(cap / 2);
  for (std::size_t i = 0; i < s.lie.dim; ++i)
    for (AKey a : monos)
      for (AKey b : monos) {
        ACombo lhs = pa.derive(i, pa.multiply(a, b));
        ACombo rhs = pa.multiply(pa.derive(i, a), ACombo{{b, s.field.from_int(1)}});
        for (const auto& [k, c] : pa.multiply(ACombo{{a, s.field.from_int(1)}}, pa.derive(i, b))) combo_add(rhs, k, c);
        if (lhs != rhs)
          rep.push_back({"leibniz", s.lie.label(i) + " on " + pa.name(a) + "*" + pa.name(b), "derivation", "not"});
      }
  auto pres = validate_presentation(e);
  rep.insert(rep.end(), pres.begin(), pres.end());
  return rep;
}

/// Z^{rs}(M) = Hom_k(V^r (x) g^s, M) and Z_{rs}(M) = M (x) V^r (x) g^s, with
/// V^r the exterior power. Input words hold increasing V-indices.
class ZComplex final : public TermComplex {
 public:
  explicit ZComplex(std::shared_ptr<const CrossedProduct> e) : TermComplex(std::move(e)) {
    poly_ = dynamic_cast<const PolynomialAlgebra*>(&e_->base());
    if (!poly_) throw std::invalid_argument("Z complexes need A = S(V)");
    const std::size_t d = e_->lie_dim();
    fhat_v_.assign(d, std::vector<SparseVector>(d));
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < d; ++j) {
        std::vector<SparseVector::Entry> ent;
        for (const auto& [k, c] : e_->fhat(i, j))
          if (pexp::total(k) == 1) ent.emplace_back(static_cast<std::size_t>(pexp::max_index(k)), c);
          else if (pexp::total(k) > 1) throw std::invalid_argument("cocycle must take values in k + V");
        fhat_v_[i][j] = SparseVector::from_entries(std::move(ent));
      }
  }

  const PolynomialAlgebra& polynomial() const { return *poly_; }
  std::size_t dim_v() const { return poly_->dim_v(); }
  const SparseVector& fhat_v(std::size_t i, std::size_t j) const { return fhat_v_.at(i).at(j); }

  std::vector<Term> terms(const Input& big) const override {
    std::vector<Term> out;
    const std::size_t r = big.r(), s = big.s();
    const auto& v = big.word;
    const int ri = static_cast<int>(r);
    // delta_0: (-1)^{i+1} [v_i, phi(v_{1 i^ r} (x) x)]. The sign (-1)^i
    // makes Gamma anticommute with delta_0 (at r = 1 it is -[v, phi] against
    // [a, phi] on the X side), so the opposite sign is used.
    for (std::size_t i = 1; i <= r; ++i) {
      std::vector<AKey> rest;
      for (std::size_t u = 0; u < r; ++u)
        if (u != i - 1) rest.push_back(v[u]);
      out.push_back({sign_of(static_cast<int>(i) + 1), Input{std::move(rest), big.wedge},
                     Op{OpKind::AComm, poly_->variable(static_cast<std::size_t>(v[i - 1])), 0}, 0});
    }
    // delta_1
    for (std::size_t i = 1; i <= s; ++i) {
      const std::size_t x = big.wedge[i - 1];
      auto rest = drop(big.wedge, i - 1);
      Scalar sg = sign_of(static_cast<int>(i) + ri);
      out.push_back({sg, Input{v, rest}, Op{OpKind::Gen, 0, x}, 1});
      for (std::size_t h = 0; h < r; ++h)
        for (const auto& [u, c] : poly_->linear_part(x, static_cast<std::size_t>(v[h]))) {
          auto w = v;
          w[h] = u;
          auto ws = normalize_wedge(w);
          if (!ws) continue;
          out.push_back({sg * c * Scalar(*ws), Input{std::move(w), rest}, Op{}, 1});
        }
    }
    bracket_terms(big, v, out);
    // delta_2: (-1)^{i+j} phi(fhat_ij ^ v_{1r} (x) x_{1 i^ j^ s})
    for (std::size_t i = 1; i <= s; ++i)
      for (std::size_t j = i + 1; j <= s; ++j) {
        const auto& fv = fhat_v_[big.wedge[i - 1]][big.wedge[j - 1]];
        if (fv.empty()) continue;
        auto rest = drop2(big.wedge, i - 1, j - 1);
        for (const auto& [u, c] : fv) {
          std::vector<AKey> w{u};
          w.insert(w.end(), v.begin(), v.end());
          auto ws = normalize_wedge(w);
          if (!ws) continue;
          out.push_back({c * sign_of(static_cast<int>(i + j)) * Scalar(*ws), Input{std::move(w), rest}, Op{}, 2});
        }
      }
    return out;
  }

  std::vector<Input> block_inputs(std::size_t r, std::size_t s) const override {
    std::vector<Input> out;
    for (const auto& wedge : subsets(e_->lie_dim(), s))
      for (const auto& vs : subsets(dim_v(), r)) out.push_back(Input{std::vector<AKey>(vs.begin(), vs.end()), wedge});
    std::sort(out.begin(), out.end());
    return out;
  }

  std::size_t max_r() const override { return dim_v(); }
  int shift() const override { return 1; }

 private:
  const PolynomialAlgebra* poly_ = nullptr;
  std::vector<std::vector<SparseVector>> fhat_v_;
};

// ---------------------------------------------------------------------------
// Gamma

namespace detail {

/// v_{sigma(1)} (x) ... (x) v_{sigma(r)} as an X-word of degree-one monomials.
inline std::vector<AKey> permuted_word(const std::vector<AKey>& vs, const std::vector<std::size_t>& sigma) {
  std::vector<AKey> w;
  for (std::size_t i : sigma) w.push_back(pexp::unit(static_cast<std::size_t>(vs[i])));
  return w;
}

}  // namespace detail

/// Gamma(phi)(v_{1r} (x) x) = sum_sigma sg(sigma) phi(v_{sigma(1)} (x) .. (x) v_{sigma(r)} (x) x)
inline GradedCochain gamma_bar_cochain(const GradedCochain& phi) {
  auto f = phi.eval;
  return {phi.degree, [f](const Input& z) {
            Element out;
            for (const auto& [sigma, sg] : permutations_with_sign(z.r()))
              out.add(f(Input{detail::permuted_word(z.word, sigma), z.wedge}), Scalar(sg));
            return out;
          }};
}

template <class V>
ChainOf<V> gamma_bar_chain(const ChainOf<V>& z) {
  ChainOf<V> out;
  for (const auto& [in, m] : z)
    for (const auto& [sigma, sg] : permutations_with_sign(in.r()))
      chain_accumulate(out, Input{detail::permuted_word(in.word, sigma), in.wedge}, m, Scalar(sg));
  return out;
}

// ---------------------------------------------------------------------------
// star products

/// (phi * phi')(v_{1r''} (x) x_{1s''}) = sum_{I, J} (-1)^{r's + sum(i_u - u) + sum(j_u - u)}
///   phi(v_I (x) x_J) phi'(v_H (x) x_L)
inline GradedCochain star_cup(std::shared_ptr<const CrossedProduct> e, const GradedCochain& phi,
                              const GradedCochain& psi) {
  const std::size_t n = phi.degree, n2 = psi.degree;
  auto f = phi.eval, g = psi.eval;
  return {n + n2, [e, n, n2, f, g](const Input& big) {
            Element out;
            if (big.degree() != n + n2) return out;
            const std::size_t rr = big.r(), ss = big.s();
            for (std::size_t r = 0; r <= std::min(n, rr); ++r) {
              const std::size_t s = n - r, r2 = rr - r;
              if (r2 > n2 || s > ss || s + (n2 - r2) != ss) continue;
              for (const auto& vi : signed_shuffles(rr, r, static_cast<int>(r2 * s)))
                for (const auto& xj : signed_shuffles(ss, s, 0)) {
                  Element a = f(Input{detail::pick_keys(big.word, vi.subset), detail::pick(big.wedge, xj.subset)});
                  if (a.is_zero()) continue;
                  Element b = g(Input{detail::pick_keys(big.word, vi.complement), detail::pick(big.wedge, xj.complement)});
                  if (b.is_zero()) continue;
                  out.add(e->multiply(a, b), Scalar(vi.sign * xj.sign));
                }
            }
            return out;
          }};
}

/// (m (x) v_{1r} (x) x_{1s}) * phi' = sum_{I, J} (-1)^{rs' + r's' + sum(i_u - u) + sum(j_u - u)}
///   m phi'(v_I (x) x_J) (x) v_H (x) x_L
template <class V, class RightAction>
ChainOf<V> star_cap(const ChainOf<V>& c, const GradedCochain& psi, RightAction act) {
  ChainOf<V> out;
  const std::size_t n2 = psi.degree;
  for (const auto& [big, m] : c) {
    if (big.degree() < n2) throw std::invalid_argument("star_cap: degree underflow");
    const std::size_t r = big.r(), s = big.s();
    for (std::size_t r2 = 0; r2 <= std::min(r, n2); ++r2) {
      const std::size_t s2 = n2 - r2;
      if (s2 > s) continue;
      for (const auto& vi : signed_shuffles(r, r2, static_cast<int>(r * s2 + r2 * s2)))
        for (const auto& xj : signed_shuffles(s, s2, 0)) {
          Element val = psi.eval(Input{detail::pick_keys(big.word, vi.subset), detail::pick(big.wedge, xj.subset)});
          if (val.is_zero()) continue;
          Input tail{detail::pick_keys(big.word, vi.complement), detail::pick(big.wedge, xj.complement)};
          chain_accumulate(out, tail, act(m, val), Scalar(vi.sign * xj.sign));
        }
    }
  }
  return out;
}

inline Chain star_cap(std::shared_ptr<const CrossedProduct> e, const Chain& c, const GradedCochain& psi) {
  return star_cap<Element>(c, psi, [e](const Element& m, const Element& u) { return e->multiply(m, u); });
}

// ---------------------------------------------------------------------------
// Truncated (co)homology of S(V) #_f U(g) with coefficients in E

struct WeylReport {
  TruncationReport cohomology;
  TruncationReport homology;
};

inline WeylReport weyl_homology_driver(const SymmetricModeSpec& spec, std::size_t n_max, const std::vector<int>& caps) {
  ZComplex z(build_symmetric(spec));
  return {truncated_betti(z, Side::Cochain, n_max, caps), truncated_betti(z, Side::Chain, n_max, caps)};
}

}  // namespace difop
