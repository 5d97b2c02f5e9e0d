// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.
#include <chrono>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>

#include "difop/comparison.hpp"
#include "difop/fixtures.hpp"
#include "difop/symmetric.hpp"

using namespace difop;

namespace {

using Sizes = std::vector<std::size_t>;

struct Outcome {
  bool ok = true;
  std::ostringstream note;
  void require(bool cond, const std::string& what) {
    if (!cond && ok) {
      ok = false;
      note << "first failure: " << what << "; ";
    }
  }
};

std::string str(const Sizes& v) {
  std::string s = "(";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
  return s + ")";
}

std::vector<Input> inputs_between(const TermComplex& tc, std::size_t lo, std::size_t hi) {
  std::vector<Input> out;
  for (std::size_t k = lo; k <= hi; ++k) {
    auto v = tc.degree_inputs(k);
    out.insert(out.end(), v.begin(), v.end());
  }
  return out;
}

BimoduleSpec k_module(std::size_t alg_dim, std::size_t lie_dim) {
  std::vector<Scalar> chi(alg_dim, Scalar(0));
  chi[0] = 1;
  return BimoduleSpec::augmentation(chi, lie_dim);
}

bool cochain_dd_vanishes(const XComplex& x, const BimoduleSpec& m, std::size_t n) {
  auto d1 = assemble(x, m, Side::Cochain, n);
  auto d2 = assemble(x, m, Side::Cochain, n + 1);
  for (const auto& v : cochain_basis_vectors(x, m, n - 1))
    if (!d2.multiply(d1.multiply(v)).empty()) return false;
  return true;
}

// modulo the chain relations in degree n-2
bool chain_dd_vanishes(const XComplex& x, const BimoduleSpec& m, std::size_t n) {
  auto comp = assemble(x, m, Side::Chain, n - 1).multiply(assemble(x, m, Side::Chain, n));
  RowEchelon e(comp.rows(), x.algebra().field());
  for (const auto& r : chain_relation_vectors(x, m, n - 2)) e.add(r);
  for (const auto& c : detail::columns_of(comp))
    if (!e.in_span(c)) return false;
  return true;
}

std::vector<AlgebraData> comparison_fixtures() {
  std::vector<AlgebraData> out{fx_dual(), fx_heis(), fx_ab2(), fx_no_lie(fx::truncated_cubic()),
                               fx_lie(fx::affine_line()), fx_lie(fx::sl2())};
  for (std::uint64_t seed = 200; out.size() < 12; ++seed)
    if (auto f = random_fixture(seed); f && f->data.algebra.dim <= 3) out.push_back(f->data);
  return out;
}

// Only inputs with r <= 1 and s <= 1.
std::vector<Input> low_bidegree(const TermComplex& tc) {
  std::vector<Input> out;
  for (const auto& in : inputs_between(tc, 0, 2))
    if (in.r() <= 1 && in.s() <= 1) out.push_back(in);
  return out;
}

std::vector<Input> polynomial_inputs(const CrossedProduct& e, std::size_t lo, std::size_t hi) {
  std::vector<Input> out;
  for (std::size_t n = lo; n <= hi; ++n) {
    auto v = polynomial_x_inputs(e, n, 2);
    out.insert(out.end(), v.begin(), v.end());
  }
  return out;
}

// ---------------------------------------------------------------------------

void ac1(Outcome& o) {
  int fixtures = 0, finite_modules = 0;
  for (std::uint64_t seed = 0; fixtures < 100; ++seed) {
    auto f = random_fixture(seed);
    if (!f) continue;
    ++fixtures;
    auto e = CrossedProduct::from_data(f->data);
    XComplex x(e);
    o.require(f->data.algebra.dim <= 4 && f->data.lie.dim <= 3, f->name + " exceeds size bounds");
    for (const auto& nm : f->modules) {
      ++finite_modules;
      for (std::size_t n = 1; n <= 3; ++n) o.require(cochain_dd_vanishes(x, nm.module, n), f->name + "/" + nm.name + " cochain");
      for (std::size_t n = 2; n <= 4; ++n) o.require(chain_dd_vanishes(x, nm.module, n), f->name + "/" + nm.name + " chain");
    }
    for (std::size_t n = 0; n <= 4; ++n) {
      o.require(regular_dd_defects(x, Side::Cochain, n).empty(), f->name + " regular cochain");
      o.require(regular_dd_defects(x, Side::Chain, n).empty(), f->name + " regular chain");
    }
  }
  o.note << fixtures << " fixtures, " << finite_modules << " finite modules plus M=E each, inputs up to degree 4";
}

void ac2(Outcome& o) {
  std::mt19937_64 rng(2);
  int fixtures = 0, min_count = 1 << 30;
  for (const auto& d : comparison_fixtures()) {
    auto e = CrossedProduct::from_data(d);
    XComplex x(e);
    auto all = inputs_between(x, 0, 3);
    int cochains = 0, chains = 0;
    for (std::size_t n = 0; n <= 3; ++n) {
      auto ins = x.degree_inputs(n);
      if (ins.empty()) continue;
      for (int t = 0; t < 25; ++t, ++cochains) {
        auto phi = random_cochain(*e, ins, n, rng);
        o.require(!first_difference(theta_bar_cochain(vartheta_bar<Element>(e, phi.eval, n)), phi.eval, ins),
                  "cochain round trip");
      }
    }
    for (; chains < 50; ++chains) {
      auto c = random_chain(*e, all, rng);
      o.require(chains_equal(vartheta_chain(*e, theta_chain(c)), c), "chain round trip");
    }
    min_count = std::min({min_count, cochains, chains});
    ++fixtures;
  }
  o.require(min_count >= 50, "fewer than 50 samples for a fixture");
  o.note << fixtures << " fixtures, >= " << min_count << " cochains and 50 chains each";
}

void ac3(Outcome& o) {
  struct Case {
    LieAlgebraSpec g;
    Sizes expected;
  };
  for (const auto& c : {Case{fx::abelian(3), {1, 3, 3, 1}}, Case{fx::sl2(), {1, 0, 0, 1}},
                        Case{fx::heisenberg(), {1, 2, 2, 1}}}) {
    XComplex x(CrossedProduct::from_data(fx_lie(c.g)));
    auto k = k_module(1, c.g.dim);
    for (std::size_t n = 1; n <= c.g.dim; ++n) {
      o.require(detail::mat_equal(assemble(x, k, Side::Cochain, n), ce::cochain_matrix(c.g, n, Field::rationals())),
                "cochain matrix degree " + std::to_string(n));
      o.require(detail::mat_equal(assemble(x, k, Side::Chain, n), ce::chain_matrix(c.g, n, Field::rationals())),
                "chain matrix degree " + std::to_string(n));
    }
    auto coh = betti_cohomology(x, k, 3), hom = betti_homology(x, k, 3);
    o.require(coh == c.expected && hom == c.expected, "Betti " + str(coh) + " / " + str(hom));
    o.require(ce_oracle_betti(c.g, 3) == c.expected, "oracle Betti");
    o.note << str(coh) << " ";
  }
  o.note << "matrices equal to the CE oracle";
}

void ac4(Outcome& o) {
  auto d = fx_no_lie(fx::dual_numbers());
  XComplex x(CrossedProduct::from_data(d));
  auto m = BimoduleSpec::algebra_itself(d.algebra);
  auto coh = betti_cohomology(x, m, 3), hom = betti_homology(x, m, 3);
  o.require(coh[0] == 2 && coh[1] == 1, "H^0, H^1 = " + str(coh));
  o.require(hom[0] == 2 && hom[1] == 1, "H_0, H_1 = " + str(hom));
  o.require(coh == bar_oracle_betti(d.algebra, m, 3), "bar oracle cohomology");
  o.require(hom == bar_oracle_homology_betti(d.algebra, m, 3), "bar oracle homology");
  for (std::size_t n = 1; n <= 3; ++n) {
    o.require(detail::mat_equal(assemble(x, m, Side::Cochain, n), bar::cochain_matrix(d.algebra, m, n, d.field)),
              "cochain matrix");
    o.require(detail::mat_equal(assemble(x, m, Side::Chain, n), bar::chain_matrix(d.algebra, m, n, d.field)),
              "chain matrix");
  }
  o.note << "cohomology " << str(coh) << ", homology " << str(hom) << ", equal to the bar oracle";
}

void ac5(Outcome& o) {
  std::mt19937_64 rng(5);
  int cups = 0, caps = 0, leibniz = 0;
  for (const auto& d : comparison_fixtures()) {
    auto e = CrossedProduct::from_data(d);
    XComplex x(e);
    auto low = low_bidegree(x);
    auto one = unit_cochain(*e);
    for (std::size_t n1 = 0; n1 <= 2; ++n1)
      for (std::size_t n2 = 0; n2 <= 2; ++n2) {
        auto p = random_cochain(*e, low, n1, rng), q = random_cochain(*e, low, n2, rng);
        auto pq = cup(e, p, q);
        auto oracle = theta_bar_cochain(
            bar_cup(e, vartheta_bar<Element>(e, p.eval, n1), vartheta_bar<Element>(e, q.eval, n2)));
        o.require(!first_difference(pq.eval, oracle, x.degree_inputs(n1 + n2)), "cup oracle");
        o.require(!first_difference(cup(e, one, p).eval, p.eval, x.degree_inputs(n1)) &&
                      !first_difference(cup(e, p, one).eval, p.eval, x.degree_inputs(n1)),
                  "cup unit");
        ++cups;
        if (n1 + n2 + 1 <= 4) {
          auto lhs = graded_coboundary(x, pq);
          auto rhs = graded_sum(cup(e, graded_coboundary(x, p), q), cup(e, p, graded_coboundary(x, q)),
                                sign_of(static_cast<int>(n1)));
          o.require(!first_difference(lhs.eval, rhs.eval, x.degree_inputs(n1 + n2 + 1)), "Leibniz");
          ++leibniz;
        }
        std::vector<Input> src;
        for (const auto& in : low)
          if (in.degree() >= n2) src.push_back(in);
        auto c = random_chain(*e, src, rng);
        auto via_bar = vartheta_chain(*e, bar_cap(e, theta_chain(c), vartheta_bar<Element>(e, q.eval, n2)));
        o.require(chains_equal(cap(e, c, q), via_bar), "cap oracle");
        o.require(chains_equal(cap(e, c, one), c), "cap unit");
        ++caps;
      }
  }
  o.require(cups >= 50 && caps >= 50 && leibniz >= 50, "too few pairs");
  o.note << cups << " cup pairs, " << caps << " cap pairs, " << leibniz << " Leibniz pairs";
}

void ac6(Outcome& o) {
  std::vector<SymmetricModeSpec> specs{fx_weyl(), fx_euler(), fx_polynomial()};
  for (std::uint64_t seed = 0; specs.size() < 50; ++seed)
    if (auto s = random_symmetric(seed)) specs.push_back(*s);
  std::mt19937_64 rng(6);
  int instances = 0;
  for (const auto& s : specs) {
    o.require(s.dim_v <= 2 && s.lie.dim <= 2, "size bounds");
    auto e = build_symmetric(s);
    ZComplex z(e);
    XComplex x(e);
    auto xin = polynomial_inputs(*e, 0, 3);
    std::vector<Input> zin = inputs_between(z, 0, 3);
    for (int t = 0; t < 2; ++t, ++instances) {
      std::size_t n1 = (instances + t) % 3, n2 = t % 2;
      auto p = random_cochain(*e, xin, n1, rng), q = random_cochain(*e, xin, n2, rng);
      o.require(!first_difference(coboundary(z, gamma_bar_cochain(p).eval),
                                  gamma_bar_cochain(graded_coboundary(x, p)).eval, z.degree_inputs(n1 + 1)),
                "cochain map");
      auto c = random_chain(*e, zin, rng);
      o.require(chains_equal(gamma_bar_chain(boundary(z, c)), boundary(x, gamma_bar_chain(c))), "chain map");
      o.require(!first_difference(gamma_bar_cochain(cup(e, p, q)).eval,
                                  star_cup(e, gamma_bar_cochain(p), gamma_bar_cochain(q)).eval,
                                  z.degree_inputs(n1 + n2)),
                "f1");
      std::vector<Input> src;
      for (const auto& in : zin)
        if (in.degree() >= n2) src.push_back(in);
      auto cc = random_chain(*e, src, rng);
      o.require(chains_equal(cap(e, gamma_bar_chain(cc), q), gamma_bar_chain(star_cap(e, cc, gamma_bar_cochain(q)))),
                "f2");
    }
  }
  o.require(instances >= 50, "too few instances");
  o.note << specs.size() << " specs, " << instances << " instances";
}

WeylReport weyl(Field field) { return weyl_homology_driver(fx_weyl(field), 2, {6, 8}); }

void ac7(Outcome& o) {
  auto rep = weyl(Field::rationals());
  Sizes coh, hom;
  for (std::size_t n = 0; n <= 2; ++n) {
    coh.push_back(rep.cohomology.residual[n][1]);
    hom.push_back(rep.homology.residual[n][1]);
    o.require(rep.cohomology.stable[n] && rep.homology.stable[n], "unstable in degree " + std::to_string(n));
  }
  o.require(coh == Sizes{1, 0, 0}, "cohomology " + str(coh));
  o.require(hom == Sizes{0, 0, 1}, "homology " + str(hom));
  o.note << "cap 8 cohomology " << str(coh) << ", homology " << str(hom) << ", stable 6->8";
}

void ac8(Outcome& o) {
  o.require(validate_symmetric(fx_weyl()).empty(), "Weyl rejected");
  o.require(validate_presentation(fx_heis()).empty(), "Heisenberg-Sridharan rejected");
  auto bad = validate_presentation(fx_bad_cocycle());
  o.require(!bad.empty(), "bad cocycle accepted");
  if (!bad.empty()) {
    o.require(!bad[0].witness.empty(), "no witness");
    o.note << "rejected: " << bad[0].check << " at " << bad[0].witness;
  }
}

void ac9(Outcome& o) {
  const Field p = Field::prime(10007);
  int compared = 0;
  for (const auto& g : {fx::abelian(3), fx::sl2(), fx::heisenberg(), fx::affine_line()}) {
    XComplex xq(CrossedProduct::from_data(fx_lie(g))), xp(CrossedProduct::from_data(fx_lie(g, p)));
    auto k = k_module(1, g.dim);
    o.require(betti_cohomology(xq, k, g.dim) == betti_cohomology(xp, k, g.dim), "CE cohomology");
    o.require(betti_homology(xq, k, g.dim) == betti_homology(xp, k, g.dim), "CE homology");
    o.require(ce_oracle_betti(g, g.dim) == ce_oracle_betti(g, g.dim, p), "CE oracle");
    compared += 3;
  }
  for (std::size_t i = 0; i < 8; ++i) {
    auto dq = fx_no_lie(fx::algebra_by_index(i)), dp = fx_no_lie(fx::algebra_by_index(i), p);
    if (dq.algebra.dim > 3) continue;
    XComplex xq(CrossedProduct::from_data(dq)), xp(CrossedProduct::from_data(dp));
    auto m = BimoduleSpec::algebra_itself(dq.algebra);
    o.require(betti_cohomology(xq, m, 3) == betti_cohomology(xp, m, 3), "bar cohomology " + std::to_string(i));
    o.require(betti_homology(xq, m, 3) == betti_homology(xp, m, 3), "bar homology " + std::to_string(i));
    compared += 2;
  }
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    auto fq = random_fixture(seed), fp = random_fixture(seed, p);
    if (!fq || !fp || fq->data.algebra.dim > 3) continue;
    XComplex xq(CrossedProduct::from_data(fq->data)), xp(CrossedProduct::from_data(fp->data));
    for (const auto& a : fq->modules)
      for (const auto& b : fp->modules)
        if (a.name == b.name) {
          o.require(betti_cohomology(xq, a.module, 2) == betti_cohomology(xp, b.module, 2), fq->name + "/" + a.name);
          ++compared;
        }
  }
  auto q = weyl(Field::rationals()), r = weyl(p);
  o.require(q.cohomology.residual == r.cohomology.residual && q.homology.residual == r.homology.residual, "Weyl driver");
  o.require(validate_presentation(fx_heis(p)).empty() && !validate_presentation(fx_bad_cocycle(p)).empty() &&
                validate_symmetric(fx_weyl(p)).empty(),
            "validator verdicts");
  compared += 2;
  o.note << compared << " results compared over F_10007";
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<void(Outcome&)>>> criteria{
      {"AC1 differential squares to zero", ac1}, {"AC2 comparison round trips", ac2},
      {"AC3 Chevalley-Eilenberg reduction", ac3}, {"AC4 bar reduction", ac4},
      {"AC5 cup/cap oracle, unit, Leibniz", ac5}, {"AC6 symmetric-mode identities", ac6},
      {"AC7 Weyl algebra truncated (co)homology", ac7}, {"AC8 presentation validator", ac8},
      {"AC9 F_10007 agrees with Q", ac9}};
  bool all = true;
  for (const auto& [name, fn] : criteria) {
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      fn(o);
    } catch (const std::exception& ex) {
      o.ok = false;
      o.note << "exception: " << ex.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("%s  %-42s %7.2fs  %s\n", o.ok ? "PASS" : "FAIL", name.c_str(), secs, o.note.str().c_str());
    std::fflush(stdout);
    all = all && o.ok;
  }
  return all ? 0 : 1;
}
