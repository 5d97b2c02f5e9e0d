#include <gtest/gtest.h>

#include "difop/comparison.hpp"
#include "difop/fixtures.hpp"

using namespace difop;

namespace {

using Sizes = std::vector<std::size_t>;

Element mono(const CrossedProduct& e, AKey a, GExp g, long c = 1) {
  return Element::monomial(a, g, e.field().from_int(c));
}

BimoduleSpec k_module(std::size_t alg_dim, std::size_t lie_dim) {
  std::vector<Scalar> chi(alg_dim, Scalar(0));
  chi[0] = 1;
  return BimoduleSpec::augmentation(chi, lie_dim);
}

/// Composite D^{n+1} D^n restricted to the cochain basis.
bool cochain_dd_vanishes(const XComplex& x, const BimoduleSpec& m, std::size_t n) {
  auto d1 = assemble(x, m, Side::Cochain, n);
  auto d2 = assemble(x, m, Side::Cochain, n + 1);
  for (const auto& v : cochain_basis_vectors(x, m, n - 1))
    if (!d2.multiply(d1.multiply(v)).empty()) return false;
  return true;
}

/// D_{n-1} D_n on every chain of degree n, modulo relations in degree n-2.
bool chain_dd_vanishes(const XComplex& x, const BimoduleSpec& m, std::size_t n) {
  auto d1 = assemble(x, m, Side::Chain, n);
  auto d0 = assemble(x, m, Side::Chain, n - 1);
  auto comp = d0.multiply(d1);
  auto rel = chain_relation_vectors(x, m, n - 2);
  RowEchelon e(comp.rows(), x.algebra().field());
  for (const auto& r : rel) e.add(r);
  for (const auto& c : detail::columns_of(comp))
    if (!e.in_span(c)) return false;
  return true;
}

}  // namespace

TEST(EnumerateCochainBasis, Examples) {
  auto d = fx_dual();
  auto e = CrossedProduct::from_data(d);
  XComplex x(e);
  auto k = k_module(2, 1);
  EXPECT_EQ(enumerate_cochain_basis(x, 1, 1, k).dimension(), 1u);
  XComplex x3(CrossedProduct::from_data(fx_lie(fx::abelian(3))));
  auto k3 = k_module(1, 3);
  EXPECT_EQ(enumerate_cochain_basis(x3, 0, 2, k3).dimension(), 3u);
  EXPECT_EQ(enumerate_cochain_basis(x3, 0, 4, k3).dimension(), 0u);
  EXPECT_THROW(enumerate_cochain_basis(x, 0, 0, BimoduleSpec::regular_module()), std::invalid_argument);
}

TEST(EnumerateCochainBasis, DimensionFormula) {
  auto d = fx::make_data(Field::rationals(), fx::exterior_two(), fx::abelian(2));
  XComplex x(CrossedProduct::from_data(d));
  auto m = BimoduleSpec::tensor(fx::left_regular_a(d), fx::right_regular_a(d));
  for (std::size_t r = 0; r <= 2; ++r)
    for (std::size_t s = 0; s <= 2; ++s) {
      std::size_t words = 1;
      for (std::size_t i = 0; i < r; ++i) words *= 3;
      EXPECT_EQ(enumerate_cochain_basis(x, r, s, m).dimension(), words * binomial(2, s) * 16);
    }
}

TEST(Coboundary, UnitIsCocycle) {
  auto e = CrossedProduct::from_data(fx_dual());
  XComplex x(e);
  auto dphi = coboundary(x, unit_cochain(*e).eval);
  for (const auto& in : x.degree_inputs(1)) EXPECT_TRUE(dphi(in).is_zero());
}

TEST(Coboundary, DualGeneratorZeroCochain) {
  auto e = CrossedProduct::from_data(fx_dual());
  XComplex x(e);
  Element gen = e->generator(0);
  auto dphi = coboundary(x, [gen](const Input& in) { return in.degree() == 0 ? gen : Element{}; });
  EXPECT_EQ(dphi(Input{{1}, {}}), -mono(*e, 1, 0));
  EXPECT_TRUE(dphi(Input{{}, {0}}).is_zero());
}

TEST(Coboundary, AugmentationZeroCochain) {
  auto d = fx_dual();
  XComplex x(CrossedProduct::from_data(d));
  auto m = BimoduleSpec::augmentation({Scalar(1), Scalar(0)}, 1);
  auto d1 = assemble(x, m, Side::Cochain, 1);
  EXPECT_TRUE(d1.multiply(SparseVector::unit(0)).empty());
}

TEST(Boundary, Examples) {
  auto e = CrossedProduct::from_data(fx_dual());
  XComplex x(e);
  Chain c1{{Input{{}, {0}}, mono(*e, 1, 0)}};
  Chain b1 = boundary(x, c1);
  ASSERT_EQ(b1.size(), 1u);
  EXPECT_EQ(b1.begin()->second, -mono(*e, 1, 0));
  Chain c2{{Input{{1}, {}}, e->generator(0)}};
  Chain b2 = boundary(x, c2);
  ASSERT_EQ(b2.size(), 1u);
  EXPECT_EQ(b2.begin()->first, (Input{{}, {}}));
  EXPECT_EQ(b2.begin()->second, mono(*e, 1, 0));

  auto d = fx_lie(fx::abelian(1));
  XComplex xk(CrossedProduct::from_data(d));
  auto k = k_module(1, 1);
  EXPECT_TRUE(assemble(xk, k, Side::Chain, 1).is_zero());
}

TEST(Betti, ChevalleyEilenbergReductions) {
  auto k3 = k_module(1, 3);
  XComplex ab(CrossedProduct::from_data(fx_lie(fx::abelian(3))));
  EXPECT_EQ(betti_cohomology(ab, k3, 3), (Sizes{1, 3, 3, 1}));
  EXPECT_EQ(betti_homology(ab, k3, 3), (Sizes{1, 3, 3, 1}));
  XComplex sl(CrossedProduct::from_data(fx_lie(fx::sl2())));
  EXPECT_EQ(betti_cohomology(sl, k3, 3), (Sizes{1, 0, 0, 1}));
  EXPECT_EQ(betti_homology(sl, k3, 3), (Sizes{1, 0, 0, 1}));
  XComplex he(CrossedProduct::from_data(fx_lie(fx::heisenberg())));
  EXPECT_EQ(betti_cohomology(he, k3, 3), (Sizes{1, 2, 2, 1}));
  EXPECT_EQ(betti_homology(he, k3, 3), (Sizes{1, 2, 2, 1}));
}

TEST(Betti, MatchesCEOracleMatrixByMatrix) {
  for (const auto& g : {fx::abelian(3), fx::sl2(), fx::heisenberg(), fx::affine_line()}) {
    XComplex x(CrossedProduct::from_data(fx_lie(g)));
    auto k = k_module(1, g.dim);
    for (std::size_t n = 1; n <= g.dim; ++n) {
      EXPECT_TRUE(detail::mat_equal(assemble(x, k, Side::Cochain, n), ce::cochain_matrix(g, n, Field::rationals())));
      EXPECT_TRUE(detail::mat_equal(assemble(x, k, Side::Chain, n), ce::chain_matrix(g, n, Field::rationals())));
    }
    EXPECT_EQ(betti_cohomology(x, k, g.dim), ce_oracle_betti(g, g.dim));
  }
}

TEST(Betti, BarReductionDualNumbers) {
  auto d = fx_no_lie(fx::dual_numbers());
  XComplex x(CrossedProduct::from_data(d));
  auto m = BimoduleSpec::algebra_itself(d.algebra);
  auto coh = betti_cohomology(x, m, 3);
  auto hom = betti_homology(x, m, 3);
  EXPECT_EQ(coh[0], 2u);
  EXPECT_EQ(coh[1], 1u);
  EXPECT_EQ(hom[0], 2u);
  EXPECT_EQ(hom[1], 1u);
  EXPECT_EQ(coh, bar_oracle_betti(d.algebra, m, 3));
  EXPECT_EQ(hom, bar_oracle_homology_betti(d.algebra, m, 3));
}

TEST(Betti, BarReductionBasisByBasis) {
  for (std::size_t i = 1; i < 8; ++i) {
    auto d = fx_no_lie(fx::algebra_by_index(i));
    if (d.algebra.dim > 3) continue;
    XComplex x(CrossedProduct::from_data(d));
    auto m = BimoduleSpec::algebra_itself(d.algebra);
    for (std::size_t n = 1; n <= 3; ++n) {
      EXPECT_TRUE(detail::mat_equal(assemble(x, m, Side::Cochain, n), bar::cochain_matrix(d.algebra, m, n, d.field)));
      EXPECT_TRUE(detail::mat_equal(assemble(x, m, Side::Chain, n), bar::chain_matrix(d.algebra, m, n, d.field)));
    }
  }
}

TEST(Betti, SeparableAlgebraHasNoHigherCohomology) {
  auto d = fx_no_lie(fx::k_times_k());
  XComplex x(CrossedProduct::from_data(d));
  auto m = BimoduleSpec::algebra_itself(d.algebra);
  EXPECT_EQ(betti_cohomology(x, m, 3), (Sizes{2, 0, 0, 0}));
  EXPECT_EQ(bar_oracle_betti(d.algebra, m, 3), (Sizes{2, 0, 0, 0}));
}

TEST(Betti, RelativeToDiagonalAgreesWithAbsolute) {
  // K = diagonal is separable, so relative and absolute theories coincide.
  auto rel = fx_triangular_relative();
  auto abs = fx_no_lie(fx::upper_triangular());
  auto m = BimoduleSpec::algebra_itself(abs.algebra);
  XComplex xr(CrossedProduct::from_data(rel)), xa(CrossedProduct::from_data(abs));
  EXPECT_EQ(betti_cohomology(xr, m, 3), betti_cohomology(xa, m, 3));
  EXPECT_EQ(betti_homology(xr, m, 3), betti_homology(xa, m, 3));
  EXPECT_EQ(betti_cohomology(xa, m, 3), bar_oracle_betti(abs.algebra, m, 3));
  EXPECT_LT(enumerate_cochain_basis(xr, 1, 0, m).dimension(), enumerate_cochain_basis(xa, 1, 0, m).dimension());
}

TEST(SmallComplexProperties, DdZeroOnFiniteModules) {
  int checked = 0;
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    auto f = random_fixture(seed);
    if (!f || f->data.algebra.dim > 3) continue;
    XComplex x(CrossedProduct::from_data(f->data));
    for (const auto& nm : f->modules) {
      for (std::size_t n = 1; n <= 2; ++n) EXPECT_TRUE(cochain_dd_vanishes(x, nm.module, n)) << f->name << nm.name;
      for (std::size_t n = 2; n <= 3; ++n) EXPECT_TRUE(chain_dd_vanishes(x, nm.module, n)) << f->name << nm.name;
      ++checked;
    }
  }
  EXPECT_GT(checked, 20);
}

TEST(SmallComplexProperties, DdZeroRelative) {
  auto d = fx_triangular_relative();
  XComplex x(CrossedProduct::from_data(d));
  auto m = BimoduleSpec::algebra_itself(d.algebra);
  for (std::size_t n = 1; n <= 3; ++n) EXPECT_TRUE(cochain_dd_vanishes(x, m, n));
  for (std::size_t n = 2; n <= 4; ++n) EXPECT_TRUE(chain_dd_vanishes(x, m, n));
}

TEST(SmallComplexProperties, DdZeroRegularSymbolic) {
  for (const auto& d : {fx_dual(), fx_heis(), fx_lie(fx::sl2()), fx_ab2()}) {
    XComplex x(CrossedProduct::from_data(d));
    for (std::size_t n = 0; n <= 3; ++n) {
      EXPECT_TRUE(regular_dd_defects(x, Side::Cochain, n).empty());
      EXPECT_TRUE(regular_dd_defects(x, Side::Chain, n).empty());
    }
  }
}

// The symbolic check is not vacuous: flipping one sign of d_1 is detected.
TEST(SmallComplexProperties, SymbolicCheckDetectsSignErrors) {
  struct Broken final : TermComplex {
    XComplex inner;
    explicit Broken(std::shared_ptr<const CrossedProduct> e) : TermComplex(e), inner(e) {}
    std::vector<Term> terms(const Input& big) const override {
      auto t = inner.terms(big);
      for (auto& term : t)
        if (term.op.kind == OpKind::Gen) term.coeff = -term.coeff;
      return t;
    }
    std::vector<Input> block_inputs(std::size_t r, std::size_t s) const override { return inner.block_inputs(r, s); }
    std::size_t max_r() const override { return inner.max_r(); }
    int shift() const override { return inner.shift(); }
  };
  Broken b(CrossedProduct::from_data(fx_dual()));
  EXPECT_FALSE(regular_dd_defects(b, Side::Cochain, 2).empty());
}

TEST(SmallComplexProperties, DegreeBookkeeping) {
  auto e = CrossedProduct::from_data(fx_heis());
  XComplex x(e);
  for (std::size_t n = 1; n <= 3; ++n)
    for (const auto& big : x.degree_inputs(n))
      for (const auto& t : x.terms(big)) {
        EXPECT_EQ(t.other.r(), big.r() + t.level - 1);
        EXPECT_EQ(t.other.s(), big.s() - t.level);
      }
}

TEST(SmallComplexProperties, NoD2WithoutCocycle) {
  for (const auto& d : {fx_dual(), fx_lie(fx::sl2()), fx_ab2()}) {
    XComplex x(CrossedProduct::from_data(d));
    auto k = k_module(d.algebra.dim, d.lie.dim);
    for (std::size_t n = 1; n <= 3; ++n) {
      EXPECT_TRUE(assemble(x, k, Side::Cochain, n, 2).is_zero());
      EXPECT_TRUE(assemble(x, k, Side::Chain, n, 2).is_zero());
    }
  }
  // with a cocycle the block is present
  auto d = fx::make_data(Field::rationals(), fx::dual_numbers(), fx::abelian(2));
  d.cocycle.values[0][1] = fx::vec({{1, 1}});
  ASSERT_TRUE(validate_presentation(d).empty());
  XComplex x(CrossedProduct::from_data(d));
  auto m = BimoduleSpec::tensor(fx::left_regular_a(d), fx::right_regular_a(d));
  EXPECT_FALSE(assemble(x, m, Side::Cochain, 2, 2).is_zero());
}

// H^0 equals the centralizer {m : am = ma, y m = m y}, solved directly.
TEST(SmallComplexProperties, ZerothCohomologyIsCentralizer) {
  int checked = 0;
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    auto f = random_fixture(seed);
    if (!f) continue;
    XComplex x(CrossedProduct::from_data(f->data));
    for (const auto& nm : f->modules) {
      const auto& m = nm.module;
      std::vector<SparseVector> rows;
      auto add = [&](const SparseMatrix& a) {
        for (std::size_t i = 0; i < a.rows(); ++i) rows.push_back(a.row(i));
      };
      for (std::size_t i = 0; i < f->data.algebra.dim; ++i)
        add(detail::mat_sub(m.left_algebra[i], m.right_algebra[i]));
      for (std::size_t g = 0; g < f->data.lie.dim; ++g) add(detail::mat_sub(m.left_lie[g], m.right_lie[g]));
      SparseMatrix sys(rows.size(), m.dim);
      for (std::size_t i = 0; i < rows.size(); ++i) sys.set_row(i, rows[i]);
      EXPECT_EQ(betti_cohomology(x, m, 0)[0], kernel_basis(sys).size()) << f->name << nm.name;
      ++checked;
    }
  }
  EXPECT_GT(checked, 20);
}

TEST(Truncation, DualNumbersCenterStabilizes) {
  XComplex x(CrossedProduct::from_data(fx_dual()));
  auto rep = truncated_betti(x, Side::Cochain, 0, {4, 5, 6});
  EXPECT_TRUE(rep.stable[0]);
  EXPECT_EQ(rep.residual[0][1], rep.residual[0][2]);
}

TEST(Truncation, ReportIsMonotoneAndRejectsNegativeCaps) {
  XComplex x(CrossedProduct::from_data(fx_heis()));
  auto rep = truncated_betti(x, Side::Chain, 1, {2, 4, 6});
  for (const auto& lb : rep.lower_bound)
    for (std::size_t i = 1; i < lb.size(); ++i) EXPECT_GE(lb[i], lb[i - 1]);
  EXPECT_THROW(truncated_betti(x, Side::Cochain, 1, {-1}), std::invalid_argument);
}

TEST(Truncation, WeylCenterIsScalars) {
  auto e = build_symmetric(fx_weyl());
  ZComplex z(e);
  auto rep = truncated_betti(z, Side::Cochain, 0, {8});
  EXPECT_EQ(rep.residual[0][0], 1u);
}
