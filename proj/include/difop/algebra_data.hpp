#pragma once

// Declarative input data for a differential operator ring E = A #_f U(g):
// the algebra A, a subalgebra K, the Lie algebra g, the (weak) action of g
// on A by derivations, the cocycle f, and finite-dimensional E-bimodules.

#include "difop/linalg.hpp"

#include <sstream>
#include <string>
#include <vector>

namespace difop {

/// One failed axiom instance. A report is valid iff it is empty.
struct ValidationFailure {
  std::string check;
  std::string witness;
  std::string expected;
  std::string got;
};

using ValidationReport = std::vector<ValidationFailure>;

inline std::string format_vector(const SparseVector& v, const std::vector<std::string>& names) {
  if (v.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [i, c] : v) {
    if (!first) os << " + ";
    first = false;
    os << c << "*" << (i < names.size() ? names[i] : "e" + std::to_string(i));
  }
  return os.str();
}

/// Finite-dimensional associative algebra given by structure constants.
struct AlgebraSpec {
  std::size_t dim = 1;
  std::size_t unit = 0;
  std::vector<std::string> names{"1"};
  /// Optional grading (one degree per basis element); empty means ungraded.
  std::vector<int> degrees;
  /// products[i][j] = e_i * e_j
  std::vector<std::vector<SparseVector>> products{{SparseVector::unit(0)}};

  static AlgebraSpec ground_field() { return AlgebraSpec{}; }

  /// An algebra with the unit products filled in; other products start at 0.
  static AlgebraSpec with_unit(std::size_t dim, std::size_t unit, std::vector<std::string> names) {
    AlgebraSpec a;
    a.dim = dim;
    a.unit = unit;
    a.names = std::move(names);
    a.products.assign(dim, std::vector<SparseVector>(dim));
    for (std::size_t i = 0; i < dim; ++i) {
      a.products[unit][i] = SparseVector::unit(i);
      a.products[i][unit] = SparseVector::unit(i);
    }
    return a;
  }

  const SparseVector& product(std::size_t i, std::size_t j) const { return products.at(i).at(j); }

  SparseVector multiply(const SparseVector& x, const SparseVector& y) const {
    SparseVector out;
    for (const auto& [i, a] : x)
      for (const auto& [j, b] : y) out = out.axpy(a * b, product(i, j));
    return out;
  }

  int degree(std::size_t i) const { return degrees.empty() ? 0 : degrees.at(i); }
  std::string name(std::size_t i) const { return i < names.size() ? names[i] : "e" + std::to_string(i); }
};

/// Subalgebra K of A, spanned by vectors in A.
struct SubalgebraSpec {
  bool ground_field = true;
  std::vector<SparseVector> span;

  /// Spanning set, with k*1 used for the ground-field case.
  std::vector<SparseVector> spanning_set(const AlgebraSpec& a) const {
    if (ground_field) return {SparseVector::unit(a.unit)};
    return span;
  }
};

/// Lie algebra with ordered basis g_1 < ... < g_d.
struct LieAlgebraSpec {
  std::size_t dim = 0;
  std::vector<std::string> labels;
  /// bracket[i][j] = [g_i, g_j] in the g-basis
  std::vector<std::vector<SparseVector>> bracket;

  static LieAlgebraSpec zero() { return {}; }

  static LieAlgebraSpec abelian(std::size_t d, std::vector<std::string> labels = {}) {
    LieAlgebraSpec g;
    g.dim = d;
    g.labels = std::move(labels);
    if (g.labels.empty())
      for (std::size_t i = 0; i < d; ++i) g.labels.push_back("x" + std::to_string(i + 1));
    g.bracket.assign(d, std::vector<SparseVector>(d));
    return g;
  }

  /// Sets [g_i, g_j] = v and [g_j, g_i] = -v.
  void set_bracket(std::size_t i, std::size_t j, const SparseVector& v) {
    bracket.at(i).at(j) = v;
    bracket.at(j).at(i) = v.scaled(-1);
  }

  const SparseVector& of(std::size_t i, std::size_t j) const { return bracket.at(i).at(j); }

  SparseVector bracket_of(const SparseVector& x, const SparseVector& y) const {
    SparseVector out;
    for (const auto& [i, a] : x)
      for (const auto& [j, b] : y) out = out.axpy(a * b, of(i, j));
    return out;
  }

  std::string label(std::size_t i) const { return i < labels.size() ? labels[i] : "g" + std::to_string(i + 1); }
};

/// a |-> a^{g_i}: images[i][j] = (e_j)^{g_i}.
struct ActionSpec {
  std::vector<std::vector<SparseVector>> images;

  static ActionSpec zero(std::size_t lie_dim, std::size_t alg_dim) {
    return ActionSpec{std::vector<std::vector<SparseVector>>(lie_dim, std::vector<SparseVector>(alg_dim))};
  }

  SparseVector apply(std::size_t gen, const SparseVector& a) const {
    SparseVector out;
    for (const auto& [j, c] : a) out = out.axpy(c, images.at(gen).at(j));
    return out;
  }
};

/// f(g_i, g_j) in A. Only the antisymmetrization enters E.
struct CocycleSpec {
  std::vector<std::vector<SparseVector>> values;

  static CocycleSpec zero(std::size_t lie_dim) {
    return CocycleSpec{std::vector<std::vector<SparseVector>>(lie_dim, std::vector<SparseVector>(lie_dim))};
  }

  const SparseVector& f(std::size_t i, std::size_t j) const { return values.at(i).at(j); }
  SparseVector fhat(std::size_t i, std::size_t j) const { return f(i, j).axpy(-1, f(j, i)); }

  bool is_zero() const {
    for (std::size_t i = 0; i < values.size(); ++i)
      for (std::size_t j = 0; j < values.size(); ++j)
        if (!fhat(i, j).empty()) return false;
    return true;
  }
};

/// Everything needed to build E.
struct AlgebraData {
  Field field;
  AlgebraSpec algebra;
  SubalgebraSpec subalgebra;
  LieAlgebraSpec lie;
  ActionSpec action;
  CocycleSpec cocycle;

  std::size_t lie_dim() const { return lie.dim; }
  std::size_t alg_dim() const { return algebra.dim; }
};

/// An E-bimodule. Finite modules act on column vectors: a.m = L_a m and
/// m.a = R_a m, so R_{ab} = R_b R_a.
struct BimoduleSpec {
  bool regular = false;
  std::size_t dim = 0;
  std::vector<SparseMatrix> left_algebra;
  std::vector<SparseMatrix> right_algebra;
  std::vector<SparseMatrix> left_lie;
  std::vector<SparseMatrix> right_lie;
  std::vector<std::string> names;

  static BimoduleSpec regular_module() {
    BimoduleSpec m;
    m.regular = true;
    return m;
  }

  /// The one-dimensional module where A acts through characters and the
  /// generators by scalars.
  static BimoduleSpec character(const std::vector<Scalar>& left_alg, const std::vector<Scalar>& left_gen,
                                const std::vector<Scalar>& right_alg, const std::vector<Scalar>& right_gen) {
    auto one_by_one = [](const Scalar& s) {
      SparseMatrix m(1, 1);
      m.set_row(0, SparseVector::unit(0, s));
      return m;
    };
    BimoduleSpec m;
    m.dim = 1;
    m.names = {"m"};
    for (const auto& s : left_alg) m.left_algebra.push_back(one_by_one(s));
    for (const auto& s : right_alg) m.right_algebra.push_back(one_by_one(s));
    for (const auto& s : left_gen) m.left_lie.push_back(one_by_one(s));
    for (const auto& s : right_gen) m.right_lie.push_back(one_by_one(s));
    return m;
  }

  /// k through an augmentation chi of A; generators act by 0.
  static BimoduleSpec augmentation(const std::vector<Scalar>& chi, std::size_t lie_dim) {
    std::vector<Scalar> zeros(lie_dim, Scalar(0));
    return character(chi, zeros, chi, zeros);
  }

  /// A as an A-bimodule (meaningful as an E-bimodule when g = 0).
  static BimoduleSpec algebra_itself(const AlgebraSpec& a) {
    BimoduleSpec m;
    m.dim = a.dim;
    m.names = a.names;
    for (std::size_t i = 0; i < a.dim; ++i) {
      std::vector<std::tuple<std::size_t, std::size_t, Scalar>> lt, rt;
      for (std::size_t j = 0; j < a.dim; ++j) {
        for (const auto& [k, c] : a.product(i, j)) lt.emplace_back(k, j, c);
        for (const auto& [k, c] : a.product(j, i)) rt.emplace_back(k, j, c);
      }
      m.left_algebra.push_back(SparseMatrix::from_triplets(a.dim, a.dim, lt));
      m.right_algebra.push_back(SparseMatrix::from_triplets(a.dim, a.dim, rt));
    }
    return m;
  }

  /// M1 (x) M2 for a left module (left_*) of `left` and a right module
  /// (right_*) of `right`; the result is a bimodule.
  static BimoduleSpec tensor(const BimoduleSpec& left, const BimoduleSpec& right) {
    auto kron = [](const SparseMatrix& a, const SparseMatrix& b) {
      std::vector<std::tuple<std::size_t, std::size_t, Scalar>> t;
      for (std::size_t i = 0; i < a.rows(); ++i)
        for (const auto& [j, x] : a.row(i))
          for (std::size_t k = 0; k < b.rows(); ++k)
            for (const auto& [l, y] : b.row(k)) t.emplace_back(i * b.rows() + k, j * b.cols() + l, x * y);
      return SparseMatrix::from_triplets(a.rows() * b.rows(), a.cols() * b.cols(), t);
    };
    BimoduleSpec m;
    m.dim = left.dim * right.dim;
    auto id_l = SparseMatrix::identity(left.dim);
    auto id_r = SparseMatrix::identity(right.dim);
    for (const auto& l : left.left_algebra) m.left_algebra.push_back(kron(l, id_r));
    for (const auto& l : left.left_lie) m.left_lie.push_back(kron(l, id_r));
    for (const auto& r : right.right_algebra) m.right_algebra.push_back(kron(id_l, r));
    for (const auto& r : right.right_lie) m.right_lie.push_back(kron(id_l, r));
    for (std::size_t i = 0; i < m.dim; ++i) m.names.push_back("m" + std::to_string(i));
    return m;
  }

  SparseMatrix left_of(const SparseVector& a) const { return combine(left_algebra, a); }
  SparseMatrix right_of(const SparseVector& a) const { return combine(right_algebra, a); }
  SparseMatrix left_of_lie(const SparseVector& x) const { return combine(left_lie, x); }
  SparseMatrix right_of_lie(const SparseVector& x) const { return combine(right_lie, x); }

 private:
  SparseMatrix combine(const std::vector<SparseMatrix>& ms, const SparseVector& v) const {
    SparseMatrix out(dim, dim);
    for (std::size_t r = 0; r < dim; ++r) {
      SparseVector row;
      for (const auto& [i, c] : v) row = row.axpy(c, ms.at(i).row(r));
      out.set_row(r, std::move(row));
    }
    return out;
  }
};

namespace detail {

inline SparseMatrix mat_sub(const SparseMatrix& a, const SparseMatrix& b) {
  SparseMatrix out(a.rows(), a.cols());
  for (std::size_t r = 0; r < a.rows(); ++r) out.set_row(r, a.row(r).axpy(-1, b.row(r)));
  return out;
}

inline SparseMatrix mat_add(const SparseMatrix& a, const SparseMatrix& b) {
  SparseMatrix out(a.rows(), a.cols());
  for (std::size_t r = 0; r < a.rows(); ++r) out.set_row(r, a.row(r).axpy(1, b.row(r)));
  return out;
}

inline bool mat_equal(const SparseMatrix& a, const SparseMatrix& b) { return mat_sub(a, b).is_zero(); }

inline std::string mat_str(const SparseMatrix& m) {
  std::ostringstream os;
  os << "[";
  for (std::size_t r = 0; r < m.rows(); ++r) {
    if (r) os << "; ";
    for (std::size_t c = 0; c < m.cols(); ++c) os << (c ? " " : "") << m.at(r, c);
  }
  os << "]";
  return os.str();
}

}  // namespace detail

/// Unit and associativity on all basis triples.
inline ValidationReport validate_algebra(const AlgebraSpec& a) {
  ValidationReport report;
  if (a.products.size() != a.dim) {
    report.push_back({"shape", "products", std::to_string(a.dim) + " rows", std::to_string(a.products.size())});
    return report;
  }
  for (std::size_t i = 0; i < a.dim; ++i) {
    auto e = SparseVector::unit(i);
    if (!(a.product(a.unit, i) == e))
      report.push_back({"unit", "1*" + a.name(i), a.name(i), format_vector(a.product(a.unit, i), a.names)});
    if (!(a.product(i, a.unit) == e))
      report.push_back({"unit", a.name(i) + "*1", a.name(i), format_vector(a.product(i, a.unit), a.names)});
  }
  for (std::size_t i = 0; i < a.dim; ++i)
    for (std::size_t j = 0; j < a.dim; ++j)
      for (std::size_t k = 0; k < a.dim; ++k) {
        auto lhs = a.multiply(a.product(i, j), SparseVector::unit(k));
        auto rhs = a.multiply(SparseVector::unit(i), a.product(j, k));
        if (!(lhs == rhs))
          report.push_back({"associativity", "(" + a.name(i) + "," + a.name(j) + "," + a.name(k) + ")",
                            format_vector(rhs, a.names), format_vector(lhs, a.names)});
      }
  return report;
}

/// Antisymmetry and the Jacobi identity on all basis triples.
inline ValidationReport validate_lie(const LieAlgebraSpec& g) {
  ValidationReport report;
  for (std::size_t i = 0; i < g.dim; ++i) {
    if (!g.of(i, i).empty())
      report.push_back({"antisymmetry", "[" + g.label(i) + "," + g.label(i) + "]", "0",
                        format_vector(g.of(i, i), g.labels)});
    for (std::size_t j = i + 1; j < g.dim; ++j)
      if (!(g.of(i, j) == g.of(j, i).scaled(-1)))
        report.push_back({"antisymmetry", "[" + g.label(i) + "," + g.label(j) + "]",
                          format_vector(g.of(j, i).scaled(-1), g.labels), format_vector(g.of(i, j), g.labels)});
  }
  for (std::size_t i = 0; i < g.dim; ++i)
    for (std::size_t j = i + 1; j < g.dim; ++j)
      for (std::size_t k = j + 1; k < g.dim; ++k) {
        auto x = SparseVector::unit(i), y = SparseVector::unit(j), z = SparseVector::unit(k);
        SparseVector sum = g.bracket_of(x, g.of(j, k));
        sum = sum.axpy(1, g.bracket_of(y, g.of(k, i)));
        sum = sum.axpy(1, g.bracket_of(z, g.of(i, j)));
        if (!sum.empty())
          report.push_back({"jacobi", "(" + g.label(i) + "," + g.label(j) + "," + g.label(k) + ")", "0",
                            format_vector(sum, g.labels)});
      }
  return report;
}

/// The prime field the data lives in, if any entry is a residue; constants
/// such as unit vectors are rational and do not decide it.
inline Field field_of(const AlgebraSpec& a, const std::vector<SparseVector>& extra = {},
                      const std::vector<std::vector<SparseVector>>* images = nullptr) {
  auto scan = [](const SparseVector& v) -> std::optional<std::uint32_t> {
    for (const auto& [i, c] : v)
      if (c.is_modular()) return c.residue().prime;
    return std::nullopt;
  };
  std::optional<std::uint32_t> p;
  for (const auto& row : a.products)
    for (const auto& v : row)
      if (!p) p = scan(v);
  for (const auto& v : extra)
    if (!p) p = scan(v);
  if (images)
    for (const auto& row : *images)
      for (const auto& v : row)
        if (!p) p = scan(v);
  return p ? Field::prime(*p) : Field::rationals();
}

/// Subalgebra: contains 1, closed under products.
inline ValidationReport validate_subalgebra(const AlgebraSpec& a, const SubalgebraSpec& k) {
  ValidationReport report;
  auto span = k.spanning_set(a);
  RowEchelon e(a.dim, field_of(a, span));
  for (const auto& v : span) e.add(v);
  if (!e.in_span(SparseVector::unit(a.unit))) report.push_back({"subalgebra-unit", "1", "in K", "not in K"});
  for (std::size_t i = 0; i < span.size(); ++i)
    for (std::size_t j = 0; j < span.size(); ++j) {
      auto p = a.multiply(span[i], span[j]);
      if (!e.in_span(p))
        report.push_back({"subalgebra-closure", "k" + std::to_string(i) + "*k" + std::to_string(j), "in K",
                          format_vector(p, a.names)});
    }
  return report;
}

/// Leibniz rule for every generator on all basis pairs, and K-stability.
/// The map x |-> D_x need not be a Lie homomorphism.
inline ValidationReport validate_action(const AlgebraSpec& a, const LieAlgebraSpec& g, const ActionSpec& act,
                                        const SubalgebraSpec& k) {
  ValidationReport report;
  if (act.images.size() != g.dim) {
    report.push_back({"shape", "action", std::to_string(g.dim) + " derivations", std::to_string(act.images.size())});
    return report;
  }
  for (std::size_t x = 0; x < g.dim; ++x) {
    for (std::size_t i = 0; i < a.dim; ++i)
      for (std::size_t j = 0; j < a.dim; ++j) {
        auto ei = SparseVector::unit(i), ej = SparseVector::unit(j);
        auto lhs = act.apply(x, a.product(i, j));
        auto rhs = a.multiply(act.apply(x, ei), ej).axpy(1, a.multiply(ei, act.apply(x, ej)));
        if (!(lhs == rhs))
          report.push_back({"leibniz", "(" + a.name(i) + "*" + a.name(j) + ")^" + g.label(x),
                            format_vector(rhs, a.names), format_vector(lhs, a.names)});
      }
    auto span = k.spanning_set(a);
    RowEchelon e(a.dim, field_of(a, span, &act.images));
    for (const auto& v : span) e.add(v);
    for (std::size_t t = 0; t < span.size(); ++t) {
      auto img = act.apply(x, span[t]);
      if (!e.in_span(img))
        report.push_back({"K-stability", "k" + std::to_string(t) + "^" + g.label(x), "in K", format_vector(img, a.names)});
    }
  }
  return report;
}

/// Checks that a finite module satisfies every defining relation of E on
/// both sides and that the two actions commute. Regular modules are checked
/// by the presentation validator.
inline ValidationReport validate_bimodule(const AlgebraData& data, const BimoduleSpec& m) {
  using detail::mat_add;
  using detail::mat_equal;
  using detail::mat_str;
  using detail::mat_sub;
  ValidationReport report;
  if (m.regular) return report;
  const auto& a = data.algebra;
  const auto& g = data.lie;
  if (m.left_algebra.size() != a.dim || m.right_algebra.size() != a.dim || m.left_lie.size() != g.dim ||
      m.right_lie.size() != g.dim) {
    report.push_back({"shape", "module", "one matrix per basis element and generator", "mismatch"});
    return report;
  }
  auto check = [&](const std::string& name, const std::string& witness, const SparseMatrix& expected,
                   const SparseMatrix& got) {
    if (!mat_equal(expected, got)) report.push_back({name, witness, mat_str(expected), mat_str(got)});
  };
  auto id = SparseMatrix::identity(m.dim);
  check("left-unit", "1", id, m.left_algebra[a.unit]);
  check("right-unit", "1", id, m.right_algebra[a.unit]);
  for (std::size_t i = 0; i < a.dim; ++i)
    for (std::size_t j = 0; j < a.dim; ++j) {
      std::string w = a.name(i) + "*" + a.name(j);
      check("left-product", w, m.left_of(a.product(i, j)), m.left_algebra[i].multiply(m.left_algebra[j]));
      check("right-product", w, m.right_of(a.product(i, j)), m.right_algebra[j].multiply(m.right_algebra[i]));
    }
  for (std::size_t x = 0; x < g.dim; ++x)
    for (std::size_t i = 0; i < a.dim; ++i) {
      std::string w = g.label(x) + "," + a.name(i);
      auto der = data.action.apply(x, SparseVector::unit(i));
      check("left-derivation", w, m.left_of(der),
            mat_sub(m.left_lie[x].multiply(m.left_algebra[i]), m.left_algebra[i].multiply(m.left_lie[x])));
      check("right-derivation", w, m.right_of(der),
            mat_sub(m.right_algebra[i].multiply(m.right_lie[x]), m.right_lie[x].multiply(m.right_algebra[i])));
    }
  for (std::size_t x = 0; x < g.dim; ++x)
    for (std::size_t y = 0; y < g.dim; ++y) {
      std::string w = g.label(x) + "," + g.label(y);
      auto fh = data.cocycle.fhat(x, y);
      check("left-bracket", w, mat_add(m.left_of_lie(g.of(x, y)), m.left_of(fh)),
            mat_sub(m.left_lie[x].multiply(m.left_lie[y]), m.left_lie[y].multiply(m.left_lie[x])));
      check("right-bracket", w, mat_add(m.right_of_lie(g.of(x, y)), m.right_of(fh)),
            mat_sub(m.right_lie[y].multiply(m.right_lie[x]), m.right_lie[x].multiply(m.right_lie[y])));
    }
  std::vector<std::pair<std::string, const SparseMatrix*>> lefts, rights;
  for (std::size_t i = 0; i < a.dim; ++i) {
    lefts.emplace_back(a.name(i), &m.left_algebra[i]);
    rights.emplace_back(a.name(i), &m.right_algebra[i]);
  }
  for (std::size_t x = 0; x < g.dim; ++x) {
    lefts.emplace_back(g.label(x), &m.left_lie[x]);
    rights.emplace_back(g.label(x), &m.right_lie[x]);
  }
  for (const auto& [ln, l] : lefts)
    for (const auto& [rn, r] : rights)
      check("commuting-actions", ln + "|" + rn, l->multiply(*r), r->multiply(*l));
  return report;
}

}  // namespace difop
