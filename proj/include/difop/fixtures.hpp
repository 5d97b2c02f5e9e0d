#pragma once

// Named example rings and random generators of valid data, used by the
// tests, the acceptance runner and the CLI.

#include "difop/rewriting.hpp"
#include "difop/symmetric.hpp"

#include <random>

namespace difop {

struct NamedModule {
  std::string name;
  BimoduleSpec module;
};

struct Fixture {
  std::string name;
  AlgebraData data;
  std::vector<NamedModule> modules;  // finite, validated
};

namespace fx {

inline SparseVector vec(std::initializer_list<std::pair<std::size_t, long>> entries) {
  std::vector<SparseVector::Entry> e;
  for (const auto& [i, c] : entries) e.emplace_back(i, Scalar(c));
  return SparseVector::from_entries(std::move(e));
}

// ---- algebras (unit is basis vector 0) ------------------------------------

inline AlgebraSpec ground() { return AlgebraSpec::ground_field(); }

/// k[e]/(e^2), deg e = 1
inline AlgebraSpec dual_numbers() {
  auto a = AlgebraSpec::with_unit(2, 0, {"1", "ε"});
  a.degrees = {0, 1};
  return a;
}

/// k[e]/(e^3)
inline AlgebraSpec truncated_cubic() {
  auto a = AlgebraSpec::with_unit(3, 0, {"1", "t", "t²"});
  a.degrees = {0, 1, 2};
  a.products[1][1] = vec({{2, 1}});
  return a;
}

/// k x k with basis {1, e}, e^2 = e
inline AlgebraSpec k_times_k() {
  auto a = AlgebraSpec::with_unit(2, 0, {"1", "e"});
  a.products[1][1] = vec({{1, 1}});
  return a;
}

/// k[x,y]/(x,y)^2
inline AlgebraSpec square_zero_plane() {
  auto a = AlgebraSpec::with_unit(3, 0, {"1", "p", "q"});
  a.degrees = {0, 1, 1};
  return a;
}

/// upper triangular 2x2 matrices, basis {1, e11, e12}
inline AlgebraSpec upper_triangular() {
  auto a = AlgebraSpec::with_unit(3, 0, {"1", "e11", "e12"});
  a.products[1][1] = vec({{1, 1}});
  a.products[1][2] = vec({{2, 1}});
  a.degrees = {0, 0, 1};
  return a;
}

/// exterior algebra on u, w
inline AlgebraSpec exterior_two() {
  auto a = AlgebraSpec::with_unit(4, 0, {"1", "u", "w", "uw"});
  a.degrees = {0, 1, 1, 2};
  a.products[1][2] = vec({{3, 1}});
  a.products[2][1] = vec({{3, -1}});
  return a;
}

/// k[e]/(e^2) (x) k[d]/(d^2)
inline AlgebraSpec dual_squared() {
  auto a = AlgebraSpec::with_unit(4, 0, {"1", "ε", "δ", "εδ"});
  a.degrees = {0, 1, 1, 2};
  a.products[1][2] = vec({{3, 1}});
  a.products[2][1] = vec({{3, 1}});
  return a;
}

// ---- Lie algebras -----------------------------------------------------------

inline LieAlgebraSpec abelian(std::size_t d) { return LieAlgebraSpec::abelian(d); }

/// [e, f] = h, [h, e] = 2e, [h, f] = -2f; order e < f < h
inline LieAlgebraSpec sl2() {
  auto g = LieAlgebraSpec::abelian(3, {"e", "f", "h"});
  g.set_bracket(0, 1, vec({{2, 1}}));
  g.set_bracket(2, 0, vec({{0, 2}}));
  g.set_bracket(2, 1, vec({{1, -2}}));
  return g;
}

/// [x, y] = h; order x < y < h
inline LieAlgebraSpec heisenberg() {
  auto g = LieAlgebraSpec::abelian(3, {"x", "y", "h"});
  g.set_bracket(0, 1, vec({{2, 1}}));
  return g;
}

/// [x, y] = y
inline LieAlgebraSpec affine_line() {
  auto g = LieAlgebraSpec::abelian(2, {"x", "y"});
  g.set_bracket(0, 1, vec({{1, 1}}));
  return g;
}

inline AlgebraData make_data(Field field, AlgebraSpec a, LieAlgebraSpec g) {
  AlgebraData d;
  d.field = field;
  d.action = ActionSpec::zero(g.dim, a.dim);
  d.cocycle = CocycleSpec::zero(g.dim);
  d.algebra = std::move(a);
  d.lie = std::move(g);
  return d;
}

// ---- modules ---------------------------------------------------------------

/// Matrix of left multiplication by e_i on A.
inline SparseMatrix left_mult(const AlgebraSpec& a, std::size_t i) {
  std::vector<std::tuple<std::size_t, std::size_t, Scalar>> t;
  for (std::size_t j = 0; j < a.dim; ++j)
    for (const auto& [k, c] : a.product(i, j)) t.emplace_back(k, j, c);
  return SparseMatrix::from_triplets(a.dim, a.dim, t);
}

inline SparseMatrix right_mult(const AlgebraSpec& a, std::size_t i) {
  std::vector<std::tuple<std::size_t, std::size_t, Scalar>> t;
  for (std::size_t j = 0; j < a.dim; ++j)
    for (const auto& [k, c] : a.product(j, i)) t.emplace_back(k, j, c);
  return SparseMatrix::from_triplets(a.dim, a.dim, t);
}

inline SparseMatrix derivation_matrix(const ActionSpec& act, std::size_t gen, std::size_t dim, const Scalar& c) {
  std::vector<std::tuple<std::size_t, std::size_t, Scalar>> t;
  for (std::size_t j = 0; j < dim; ++j)
    for (const auto& [k, v] : act.images.at(gen).at(j)) t.emplace_back(k, j, c * v);
  return SparseMatrix::from_triplets(dim, dim, t);
}

/// A as a left E-module: a acts by multiplication, y_i by the derivation.
inline BimoduleSpec left_regular_a(const AlgebraData& d) {
  BimoduleSpec m;
  m.dim = d.algebra.dim;
  for (std::size_t i = 0; i < d.algebra.dim; ++i) m.left_algebra.push_back(left_mult(d.algebra, i));
  for (std::size_t x = 0; x < d.lie.dim; ++x) m.left_lie.push_back(derivation_matrix(d.action, x, m.dim, Scalar(1)));
  return m;
}

/// A as a right E-module: a acts by multiplication, y_i by minus the derivation.
inline BimoduleSpec right_regular_a(const AlgebraData& d) {
  BimoduleSpec m;
  m.dim = d.algebra.dim;
  for (std::size_t i = 0; i < d.algebra.dim; ++i) m.right_algebra.push_back(right_mult(d.algebra, i));
  for (std::size_t x = 0; x < d.lie.dim; ++x) m.right_lie.push_back(derivation_matrix(d.action, x, m.dim, Scalar(-1)));
  return m;
}

/// Algebra maps A -> k with values in {0, 1} on the non-unit basis vectors.
inline std::vector<std::vector<Scalar>> characters(const AlgebraSpec& a) {
  std::vector<std::vector<Scalar>> out;
  const std::size_t free = a.dim - 1;
  for (std::size_t mask = 0; mask < (std::size_t{1} << free); ++mask) {
    std::vector<Scalar> chi(a.dim, Scalar(0));
    std::size_t bit = 0;
    for (std::size_t i = 0; i < a.dim; ++i) {
      if (i == a.unit) {
        chi[i] = 1;
        continue;
      }
      chi[i] = (mask >> bit++) & 1 ? Scalar(1) : Scalar(0);
    }
    bool ok = true;
    for (std::size_t i = 0; i < a.dim && ok; ++i)
      for (std::size_t j = 0; j < a.dim && ok; ++j) {
        Scalar v = 0;
        for (const auto& [k, c] : a.product(i, j)) v += c * chi[k];
        ok = v == chi[i] * chi[j];
      }
    if (ok) out.push_back(std::move(chi));
  }
  return out;
}

inline BimoduleSpec left_character(const std::vector<Scalar>& chi, const std::vector<Scalar>& lambda) {
  auto full = BimoduleSpec::character(chi, lambda, chi, lambda);
  BimoduleSpec m;
  m.dim = 1;
  m.left_algebra = full.left_algebra;
  m.left_lie = full.left_lie;
  return m;
}

inline BimoduleSpec right_character(const std::vector<Scalar>& chi, const std::vector<Scalar>& lambda) {
  auto full = BimoduleSpec::character(chi, lambda, chi, lambda);
  BimoduleSpec m;
  m.dim = 1;
  m.right_algebra = full.right_algebra;
  m.right_lie = full.right_lie;
  return m;
}

/// k through the first character of A with all generators acting by 0.
inline BimoduleSpec trivial_module(const AlgebraData& d) {
  auto chis = characters(d.algebra);
  if (chis.empty()) throw std::invalid_argument("algebra has no character with 0/1 values");
  return BimoduleSpec::augmentation(chis.front(), d.lie.dim);
}

/// Derivations of A (kernel of the Leibniz system), each as a list of images
/// of the basis vectors.
inline std::vector<std::vector<SparseVector>> derivations(const AlgebraSpec& a, const Field& field) {
  const std::size_t n = a.dim;
  // unknown D[j][k] = coefficient of e_k in D(e_j), flattened j * n + k
  std::vector<SparseVector> rows;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k) {
        // coefficient of e_k in D(e_i e_j) - D(e_i) e_j - e_i D(e_j)
        std::map<std::size_t, Scalar> row;
        for (const auto& [l, c] : a.product(i, j)) row[l * n + k] += c;
        for (std::size_t l = 0; l < n; ++l) {
          for (const auto& [kk, c] : a.product(l, j))
            if (kk == k) row[i * n + l] -= c;
          for (const auto& [kk, c] : a.product(i, l))
            if (kk == k) row[j * n + l] -= c;
        }
        std::vector<SparseVector::Entry> e;
        for (const auto& [idx, c] : row)
          if (!c.is_zero()) e.emplace_back(idx, c);
        rows.push_back(SparseVector::from_entries(std::move(e)));
      }
  SparseMatrix m(rows.size(), n * n);
  for (std::size_t r = 0; r < rows.size(); ++r) m.set_row(r, rows[r]);
  std::vector<std::vector<SparseVector>> out;
  for (const auto& v : kernel_basis(m, field)) {
    std::vector<SparseVector> images(n);
    for (std::size_t j = 0; j < n; ++j) {
      std::vector<SparseVector::Entry> e;
      for (std::size_t k = 0; k < n; ++k) {
        Scalar c = v.at(j * n + k);
        if (!c.is_zero()) e.emplace_back(k, c);
      }
      images[j] = SparseVector::from_entries(std::move(e));
    }
    out.push_back(std::move(images));
  }
  return out;
}

/// Keeps the modules that pass validate_bimodule.
inline std::vector<NamedModule> valid_modules(const AlgebraData& d, std::vector<NamedModule> candidates) {
  std::vector<NamedModule> out;
  for (auto& c : candidates)
    if (validate_bimodule(d, c.module).empty()) out.push_back(std::move(c));
  return out;
}

}  // namespace fx

// ---- named fixtures -----------------------------------------------------------

/// A = k[e]/(e^2), g = <x>, e^x = e, f = 0
inline AlgebraData fx_dual(Field field = Field::rationals()) {
  auto d = fx::make_data(field, fx::dual_numbers(), LieAlgebraSpec::abelian(1, {"x"}));
  d.action.images[0][1] = fx::vec({{1, 1}});
  return d;
}

/// A = k, [x, y] = h, fhat(x, y) = 1
inline AlgebraData fx_heis(Field field = Field::rationals()) {
  auto d = fx::make_data(field, fx::ground(), fx::heisenberg());
  d.cocycle.values[0][1] = fx::vec({{0, 1}});
  return d;
}

/// A = k, g abelian of dimension 2, f = 0
inline AlgebraData fx_ab2(Field field = Field::rationals()) {
  return fx::make_data(field, fx::ground(), LieAlgebraSpec::abelian(2, {"x1", "x2"}));
}

/// A = k, f = 0, Lie algebra g: the Chevalley-Eilenberg reduction.
inline AlgebraData fx_lie(const LieAlgebraSpec& g, Field field = Field::rationals()) {
  return fx::make_data(field, fx::ground(), g);
}

/// g = 0: the bar reduction.
inline AlgebraData fx_no_lie(const AlgebraSpec& a, Field field = Field::rationals()) {
  return fx::make_data(field, a, LieAlgebraSpec::zero());
}

/// Upper triangular matrices over K = the diagonal, g = 0.
inline AlgebraData fx_triangular_relative(Field field = Field::rationals()) {
  auto d = fx_no_lie(fx::upper_triangular(), field);
  d.subalgebra.ground_field = false;
  d.subalgebra.span = {fx::vec({{0, 1}}), fx::vec({{1, 1}})};
  return d;
}

/// [x, y] = y, z central, fhat(y, z) = 1, A = k: not a valid presentation.
inline AlgebraData fx_bad_cocycle(Field field = Field::rationals()) {
  auto g = LieAlgebraSpec::abelian(3, {"x", "y", "z"});
  g.set_bracket(0, 1, fx::vec({{1, 1}}));
  auto d = fx::make_data(field, fx::ground(), g);
  d.cocycle.values[1][2] = fx::vec({{0, 1}});
  return d;
}

// ---- symmetric mode -----------------------------------------------------------

inline SymmetricModeSpec symmetric_base(Field field, std::size_t dim_v, LieAlgebraSpec g,
                                        std::vector<std::string> labels = {}) {
  SymmetricModeSpec s;
  s.field = field;
  s.dim_v = dim_v;
  s.v_labels = std::move(labels);
  s.lie = std::move(g);
  s.zero_tables();
  return s;
}

/// dim V = 1, g = <x>, v^x = 1, f = 0: the first Weyl algebra.
inline SymmetricModeSpec fx_weyl(Field field = Field::rationals()) {
  auto s = symmetric_base(field, 1, LieAlgebraSpec::abelian(1, {"x"}), {"v"});
  s.act_const[0][0] = 1;
  return s;
}

/// v^x = v
inline SymmetricModeSpec fx_euler(Field field = Field::rationals()) {
  auto s = symmetric_base(field, 1, LieAlgebraSpec::abelian(1, {"x"}), {"v"});
  s.act_lin[0][0] = fx::vec({{0, 1}});
  return s;
}

/// zero action, f = 0: k[v] (x) k[x]
inline SymmetricModeSpec fx_polynomial(Field field = Field::rationals()) {
  return symmetric_base(field, 1, LieAlgebraSpec::abelian(1, {"x"}), {"v"});
}

// ---- random generators -------------------------------------------------------------

namespace fx {

inline AlgebraSpec algebra_by_index(std::size_t i) {
  switch (i % 8) {
    case 0: return ground();
    case 1: return dual_numbers();
    case 2: return truncated_cubic();
    case 3: return k_times_k();
    case 4: return square_zero_plane();
    case 5: return upper_triangular();
    case 6: return exterior_two();
    default: return dual_squared();
  }
}

inline LieAlgebraSpec lie_by_index(std::size_t i) {
  switch (i % 7) {
    case 0: return LieAlgebraSpec::zero();
    case 1: return abelian(1);
    case 2: return abelian(2);
    case 3: return affine_line();
    case 4: return abelian(3);
    case 5: return heisenberg();
    default: return sl2();
  }
}

inline long small_int(std::mt19937_64& rng, long lo, long hi) {
  return std::uniform_int_distribution<long>(lo, hi)(rng);
}

inline std::vector<NamedModule> module_candidates(const AlgebraData& d, std::mt19937_64& rng) {
  std::vector<NamedModule> c;
  auto chis = characters(d.algebra);
  auto lambdas = [&]() {
    std::vector<Scalar> l;
    for (std::size_t i = 0; i < d.lie.dim; ++i) l.push_back(Scalar(small_int(rng, -1, 2)));
    return l;
  };
  std::vector<Scalar> zeros(d.lie.dim, Scalar(0));
  if (!chis.empty()) {
    const auto& chi = chis[static_cast<std::size_t>(small_int(rng, 0, static_cast<long>(chis.size()) - 1))];
    c.push_back({"k", BimoduleSpec::augmentation(chi, d.lie.dim)});
    c.push_back({"k-twisted", BimoduleSpec::tensor(left_character(chi, lambdas()), right_character(chi, lambdas()))});
    c.push_back({"A(x)k", BimoduleSpec::tensor(left_regular_a(d), right_character(chi, zeros))});
    c.push_back({"k(x)A", BimoduleSpec::tensor(left_character(chi, zeros), right_regular_a(d))});
  }
  if (d.algebra.dim <= 3) c.push_back({"A(x)A", BimoduleSpec::tensor(left_regular_a(d), right_regular_a(d))});
  return c;
}

}  // namespace fx

/// A random valid fixture with finite modules, or nullopt when the sampled
/// data fails validation. Families: trivial action; one generator acting by
/// a random derivation; abelian g acting by multiples of one derivation;
/// trivial action with a random cocycle.
inline std::optional<Fixture> random_fixture(std::uint64_t seed, Field field = Field::rationals()) {
  std::mt19937_64 rng(seed);
  const std::size_t family = static_cast<std::size_t>(fx::small_int(rng, 0, 3));
  AlgebraSpec a = fx::algebra_by_index(static_cast<std::size_t>(fx::small_int(rng, 0, 7)));
  LieAlgebraSpec g;
  switch (family) {
    case 0: g = fx::lie_by_index(static_cast<std::size_t>(fx::small_int(rng, 0, 6))); break;
    case 1: g = fx::abelian(1); break;
    case 2: g = fx::abelian(static_cast<std::size_t>(fx::small_int(rng, 2, 3))); break;
    default: g = fx::lie_by_index(static_cast<std::size_t>(fx::small_int(rng, 2, 5))); break;
  }
  AlgebraData d = fx::make_data(field, a, g);
  std::string name = "random-" + std::to_string(seed) + "-family" + std::to_string(family);
  if (family == 1 || family == 2) {
    auto ders = fx::derivations(d.algebra, Field::rationals());
    std::vector<SparseVector> der(d.algebra.dim);
    for (const auto& basis : ders) {
      long c = fx::small_int(rng, -2, 2);
      for (std::size_t j = 0; j < d.algebra.dim; ++j) der[j] = der[j].axpy(Scalar(c), basis[j]);
    }
    for (std::size_t x = 0; x < g.dim; ++x) {
      long c = family == 1 ? 1 : fx::small_int(rng, -1, 2);
      for (std::size_t j = 0; j < d.algebra.dim; ++j) d.action.images[x][j] = der[j].scaled(Scalar(c));
    }
  }
  if (family == 3) {
    for (std::size_t i = 0; i < g.dim; ++i)
      for (std::size_t j = i + 1; j < g.dim; ++j) {
        std::vector<SparseVector::Entry> e;
        for (std::size_t k = 0; k < d.algebra.dim; ++k) {
          long c = fx::small_int(rng, -1, 1);
          if (c) e.emplace_back(k, Scalar(c));
        }
        d.cocycle.values[i][j] = SparseVector::from_entries(std::move(e));
      }
  }
  if (!validate_algebra(d.algebra).empty() || !validate_lie(d.lie).empty() ||
      !validate_action(d.algebra, d.lie, d.action, d.subalgebra).empty() || !validate_presentation(d).empty())
    return std::nullopt;
  Fixture f{name, d, fx::valid_modules(d, fx::module_candidates(d, rng))};
  return f;
}

/// Random element with up to `terms` monomials of filtration <= cap.
inline Element random_element(const CrossedProduct& e, std::mt19937_64& rng, int cap = 2, int terms = 2) {
  auto monos = monomials_up_to(e, cap);
  Element out;
  for (int t = 0; t < terms; ++t) {
    const auto& m = monos[static_cast<std::size_t>(fx::small_int(rng, 0, static_cast<long>(monos.size()) - 1))];
    out.add(m, e.field().from_int(fx::small_int(rng, -2, 2)));
  }
  return out;
}

/// Random cochain of total degree n supported on the given inputs.
inline GradedCochain random_cochain(const CrossedProduct& e, const std::vector<Input>& inputs, std::size_t n,
                                    std::mt19937_64& rng, int cap = 2) {
  std::map<Input, Element> table;
  for (const auto& in : inputs)
    if (in.degree() == n && fx::small_int(rng, 0, 2) > 0) table[in] = random_element(e, rng, cap);
  return {n, table_cochain(std::move(table))};
}

inline Chain random_chain(const CrossedProduct& e, const std::vector<Input>& inputs, std::mt19937_64& rng,
                          int cap = 2) {
  Chain c;
  for (const auto& in : inputs)
    if (fx::small_int(rng, 0, 2) > 0) {
      Element v = random_element(e, rng, cap);
      if (!v.is_zero()) c[in] = v;
    }
  return c;
}

/// Inputs of the X complex over S(V) of total degree n whose words use
/// monomials of degree 1..max_deg.
inline std::vector<Input> polynomial_x_inputs(const CrossedProduct& e, std::size_t n, unsigned max_deg) {
  const auto& pa = dynamic_cast<const PolynomialAlgebra&>(e.base());
  auto monos = pa.monomials_up_to(max_deg);
  monos.erase(monos.begin());  // drop 1
  std::vector<Input> out;
  for (std::size_t s = 0; s <= std::min(n, e.lie_dim()); ++s)
    for (const auto& wedge : subsets(e.lie_dim(), s))
      for (const auto& w : words(monos.size(), n - s)) {
        Input in;
        for (std::size_t i : w) in.word.push_back(monos[i]);
        in.wedge = wedge;
        out.push_back(std::move(in));
      }
  return out;
}

/// A random valid symmetric-mode spec with dim V <= 2, dim g <= 2.
inline std::optional<SymmetricModeSpec> random_symmetric(std::uint64_t seed, Field field = Field::rationals()) {
  std::mt19937_64 rng(seed);
  const std::size_t dv = static_cast<std::size_t>(fx::small_int(rng, 1, 2));
  const std::size_t dg = static_cast<std::size_t>(fx::small_int(rng, 1, 2));
  LieAlgebraSpec g = dg == 2 && fx::small_int(rng, 0, 1) ? fx::affine_line() : fx::abelian(dg);
  auto s = symmetric_base(field, dv, g);
  const long family = fx::small_int(rng, 0, 2);
  // family 0: constant action (Weyl-like), 1: linear action by commuting
  // multiples of one matrix, 2: constant action plus cocycle
  SparseMatrix lin(dv, dv);
  if (family == 1) {
    std::vector<std::tuple<std::size_t, std::size_t, Scalar>> t;
    for (std::size_t i = 0; i < dv; ++i)
      for (std::size_t j = 0; j < dv; ++j)
        if (long c = fx::small_int(rng, -1, 1)) t.emplace_back(i, j, Scalar(c));
    lin = SparseMatrix::from_triplets(dv, dv, t);
  }
  for (std::size_t x = 0; x < dg; ++x) {
    long mult = fx::small_int(rng, -1, 1);
    for (std::size_t t = 0; t < dv; ++t) {
      if (family != 1) s.act_const[x][t] = Scalar(fx::small_int(rng, -1, 1));
      if (family == 1) {
        s.act_const[x][t] = Scalar(fx::small_int(rng, -1, 1));
        s.act_lin[x][t] = lin.row(t).scaled(Scalar(mult));
      }
    }
  }
  if (family == 2)
    for (std::size_t i = 0; i < dg; ++i)
      for (std::size_t j = 0; j < dg; ++j) {
        if (i == j) continue;
        s.f_const[i][j] = Scalar(fx::small_int(rng, -1, 1));
        std::vector<SparseVector::Entry> e;
        for (std::size_t u = 0; u < dv; ++u)
          if (long c = fx::small_int(rng, -1, 1)) e.emplace_back(u, Scalar(c));
        s.f_lin[i][j] = SparseVector::from_entries(std::move(e));
      }
  if (!validate_symmetric(s).empty()) return std::nullopt;
  return s;
}

}  // namespace difop
