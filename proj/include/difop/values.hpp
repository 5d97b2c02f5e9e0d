#pragma once

// Coefficient values shared by the product and comparison code: either an
// Element of E (M = E) or a coordinate vector of a finite module.

#include "difop/complexes.hpp"

namespace difop {

template <class V>
using CochainOf = std::function<V(const Input&)>;

template <class V>
using ChainOf = std::map<Input, V>;

inline void add_scaled(Element& into, const Element& v, const Scalar& c) { into.add(v, c); }
inline void add_scaled(SparseVector& into, const SparseVector& v, const Scalar& c) { into = into.axpy(c, v); }

inline bool value_is_zero(const Element& v) { return v.is_zero(); }
inline bool value_is_zero(const SparseVector& v) { return v.empty(); }

template <class V>
void chain_accumulate(ChainOf<V>& ch, const Input& in, const V& v, const Scalar& c) {
  if (value_is_zero(v) || c.is_zero()) return;
  auto it = ch.find(in);
  if (it == ch.end()) it = ch.emplace(in, V{}).first;
  add_scaled(it->second, v, c);
  if (value_is_zero(it->second)) ch.erase(it);
}

template <class V>
bool chains_equal(const ChainOf<V>& a, const ChainOf<V>& b) {
  ChainOf<V> diff = a;
  for (const auto& [in, v] : b) chain_accumulate(diff, in, v, Scalar(-1));
  return diff.empty();
}

/// m . u for m in a finite module (column vector) and u in E. With
/// R_{ab} = R_b R_a the PBW monomial a # y^e acts as R_a, then the y's in order.
inline SparseVector right_act(const BimoduleSpec& m, const SparseVector& v, const Element& u) {
  SparseVector out;
  for (const auto& [mono, c] : u) {
    SparseVector w = m.right_algebra.at(static_cast<std::size_t>(mono.a)).multiply(v);
    for (std::size_t i = 0; i < pexp::kMaxVars; ++i)
      for (unsigned t = 0; t < pexp::get(mono.g, i); ++t) w = m.right_lie.at(i).multiply(w);
    out = out.axpy(c, w);
  }
  return out;
}

/// u . m
inline SparseVector left_act(const BimoduleSpec& m, const Element& u, const SparseVector& v) {
  SparseVector out;
  for (const auto& [mono, c] : u) {
    SparseVector w = v;
    // a # y^e acts as L_a L_{y_1}^{e_1} ... on the left: innermost is the last generator
    for (int i = static_cast<int>(pexp::kMaxVars) - 1; i >= 0; --i)
      for (unsigned t = 0; t < pexp::get(mono.g, static_cast<std::size_t>(i)); ++t)
        w = m.left_lie.at(static_cast<std::size_t>(i)).multiply(w);
    w = m.left_algebra.at(static_cast<std::size_t>(mono.a)).multiply(w);
    out = out.axpy(c, w);
  }
  return out;
}

/// Cochain of total degree n read off k-level coordinates (as produced by
/// assemble / cochain_basis_vectors) for a finite module.
inline CochainOf<SparseVector> coordinate_cochain(const TermComplex& tc, const BimoduleSpec& m, std::size_t n,
                                                   const SparseVector& coords) {
  auto idx = std::make_shared<DegreeIndex>(tc.degree_inputs(n));
  auto vals = std::make_shared<std::map<Input, SparseVector>>();
  for (const auto& [i, c] : coords) {
    const Input& in = idx->inputs.at(i / m.dim);
    auto& slot = (*vals)[in];
    slot = slot.axpy(Scalar(1), SparseVector::unit(i % m.dim, c));
  }
  return [vals](const Input& in) {
    auto it = vals->find(in);
    return it == vals->end() ? SparseVector{} : it->second;
  };
}

}  // namespace difop
