#pragma once

// The operation . on cochains with values in E, and its action on chains.
//
// Cochains here are homogeneous of a total degree n and carry all their
// (r, s) components at once; the product of degrees n and n' pairs every
// component (r, s) with the matching (r'', s'') - (r, s).

#include "difop/values.hpp"

namespace difop {

struct GradedCochain {
  std::size_t degree = 0;
  Cochain eval;
};

inline GradedCochain unit_cochain(const CrossedProduct& e) {
  Element one = e.one();
  return {0, [one](const Input& in) { return in.degree() == 0 ? one : Element{}; }};
}

/// sg(j_{1s}) = (-1)^{r's + sum (j_u - u)}
struct SignedShuffleIndex {
  std::vector<std::size_t> subset;
  std::vector<std::size_t> complement;
  int sign = 1;
};

inline std::vector<SignedShuffleIndex> signed_shuffles(std::size_t total, std::size_t k, int extra_exponent) {
  std::vector<SignedShuffleIndex> out;
  for (auto& j : subsets(total, k)) {
    SignedShuffleIndex idx;
    idx.sign = parity_sign(extra_exponent + shuffle_exponent(j));
    idx.complement = complement_of(j, total);
    idx.subset = std::move(j);
    out.push_back(std::move(idx));
  }
  return out;
}

namespace detail {

inline std::vector<std::size_t> pick(const std::vector<std::size_t>& w, const std::vector<std::size_t>& at) {
  std::vector<std::size_t> out;
  for (std::size_t i : at) out.push_back(w[i]);
  return out;
}

inline std::vector<AKey> pick_keys(const std::vector<AKey>& w, const std::vector<std::size_t>& at) {
  std::vector<AKey> out;
  for (std::size_t i : at) out.push_back(w[i]);
  return out;
}

}  // namespace detail

/// (phi . phi')(a_{1r''} (x) x_{1s''})
///   = sum_{j} (-1)^{r's + sum(j_u - u)} phi(a_{1r} (x) x_J) phi'(a_{r+1,r''} (x) x_L)
inline GradedCochain cup(std::shared_ptr<const CrossedProduct> e, const GradedCochain& phi, const GradedCochain& psi) {
  const std::size_t n = phi.degree, n2 = psi.degree;
  auto f = phi.eval, g = psi.eval;
  return {n + n2, [e, n, n2, f, g](const Input& big) {
            Element out;
            if (big.degree() != n + n2) return out;
            const std::size_t rr = big.r(), ss = big.s();
            for (std::size_t r = 0; r <= std::min(n, rr); ++r) {
              const std::size_t s = n - r, r2 = rr - r;
              if (r2 > n2 || s > ss) continue;
              const std::size_t s2 = n2 - r2;
              if (s + s2 != ss) continue;
              Input left{{big.word.begin(), big.word.begin() + static_cast<std::ptrdiff_t>(r)}, {}};
              Input right{{big.word.begin() + static_cast<std::ptrdiff_t>(r), big.word.end()}, {}};
              for (const auto& sh : signed_shuffles(ss, s, static_cast<int>(r2 * s))) {
                left.wedge = detail::pick(big.wedge, sh.subset);
                Element a = f(left);
                if (a.is_zero()) continue;
                right.wedge = detail::pick(big.wedge, sh.complement);
                Element b = g(right);
                if (b.is_zero()) continue;
                out.add(e->multiply(a, b), Scalar(sh.sign));
              }
            }
            return out;
          }};
}

/// (m (x) a_{1r} (x) x_{1s}) . phi'
///   = sum_{j} (-1)^{rs' + r's' + sum(j_u - u)} m phi'(a_{1r'} (x) x_J) (x) a_{r'+1,r} (x) x_L
/// `act(m, u)` is the right action of u in E on a coefficient m.
template <class V, class RightAction>
ChainOf<V> cap(const ChainOf<V>& c, const GradedCochain& psi, RightAction act) {
  ChainOf<V> out;
  const std::size_t n2 = psi.degree;
  for (const auto& [big, m] : c) {
    if (big.degree() < n2) throw std::invalid_argument("cap: degree underflow");
    const std::size_t r = big.r(), s = big.s();
    for (std::size_t r2 = 0; r2 <= std::min(r, n2); ++r2) {
      const std::size_t s2 = n2 - r2;
      if (s2 > s) continue;
      Input head{{big.word.begin(), big.word.begin() + static_cast<std::ptrdiff_t>(r2)}, {}};
      Input tail{{big.word.begin() + static_cast<std::ptrdiff_t>(r2), big.word.end()}, {}};
      for (const auto& sh : signed_shuffles(s, s2, static_cast<int>(r * s2 + r2 * s2))) {
        head.wedge = detail::pick(big.wedge, sh.subset);
        Element val = psi.eval(head);
        if (val.is_zero()) continue;
        tail.wedge = detail::pick(big.wedge, sh.complement);
        chain_accumulate(out, tail, act(m, val), Scalar(sh.sign));
      }
    }
  }
  return out;
}

/// Cap with M = E.
inline Chain cap(std::shared_ptr<const CrossedProduct> e, const Chain& c, const GradedCochain& psi) {
  return cap<Element>(c, psi, [e](const Element& m, const Element& u) { return e->multiply(m, u); });
}

/// Cap with a finite module.
inline ChainOf<SparseVector> cap(const BimoduleSpec& m, const ChainOf<SparseVector>& c, const GradedCochain& psi) {
  return cap<SparseVector>(c, psi, [&m](const SparseVector& v, const Element& u) { return right_act(m, v, u); });
}

inline GradedCochain graded_coboundary(const TermComplex& tc, const GradedCochain& phi) {
  return {phi.degree + 1, coboundary(tc, phi.eval)};
}

inline GradedCochain graded_sum(const GradedCochain& a, const GradedCochain& b, const Scalar& cb = 1) {
  if (a.degree != b.degree) throw std::invalid_argument("graded_sum: degrees differ");
  auto f = a.eval, g = b.eval;
  return {a.degree, [f, g, cb](const Input& in) {
            Element v = f(in);
            v.add(g(in), cb);
            return v;
          }};
}

/// Compares two cochains of the same degree on the given inputs. Returns
/// the first input where they differ.
inline std::optional<Input> first_difference(const Cochain& a, const Cochain& b, const std::vector<Input>& inputs) {
  for (const auto& in : inputs)
    if (a(in) != b(in)) return in;
  return std::nullopt;
}

}  // namespace difop
