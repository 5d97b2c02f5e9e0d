#pragma once

// Word rewriting for E, independent of the memoized multiplication in
// CrossedProduct. Used to check confluence (diamond lemma) and as a test
// oracle for products.

#include "difop/crossed_product.hpp"

namespace difop {

class WordReducer {
 public:
  struct Letter {
    bool gen = false;
    std::uint64_t id = 0;
    friend auto operator<=>(const Letter&, const Letter&) = default;
  };
  using Word = std::vector<Letter>;
  using Combo = std::map<Word, Scalar>;

  explicit WordReducer(std::shared_ptr<const CrossedProduct> e) : e_(std::move(e)) {}

  static Letter a_letter(AKey a) { return Letter{false, a}; }
  static Letter g_letter(std::size_t i) { return Letter{true, i}; }

  /// Position of the leftmost reducible pair, or npos when normal.
  std::size_t leftmost_redex(const Word& w) const {
    for (std::size_t p = 0; p + 1 < w.size(); ++p)
      if (reducible(w[p], w[p + 1])) return p;
    return npos;
  }

  /// One rewrite at position p.
  Combo rewrite_at(const Word& w, std::size_t p) const {
    const Letter& l = w[p];
    const Letter& r = w[p + 1];
    Combo out;
    const Scalar one = e_->field().from_int(1);
    auto splice = [&](std::vector<Letter> middle, const Scalar& c) {
      Word nw(w.begin(), w.begin() + static_cast<std::ptrdiff_t>(p));
      nw.insert(nw.end(), middle.begin(), middle.end());
      nw.insert(nw.end(), w.begin() + static_cast<std::ptrdiff_t>(p + 2), w.end());
      add(out, std::move(nw), c);
    };
    if (!l.gen && !r.gen) {
      for (const auto& [k, c] : e_->base().multiply(l.id, r.id)) splice({a_letter(k)}, c);
    } else if (l.gen && !r.gen) {
      splice({r, l}, one);
      for (const auto& [k, c] : e_->base().derive(l.id, r.id)) splice({a_letter(k)}, c);
    } else if (l.gen && r.gen && l.id > r.id) {
      splice({r, l}, one);
      for (const auto& [t, c] : e_->lie().of(l.id, r.id)) splice({g_letter(t)}, c);
      for (const auto& [k, c] : e_->fhat(l.id, r.id)) splice({a_letter(k)}, c);
    } else {
      throw std::logic_error("rewrite_at: no rule applies");
    }
    return out;
  }

  Element reduce(Combo pending) const {
    Element result;
    while (!pending.empty()) {
      auto node = pending.extract(pending.begin());
      const Word& w = node.key();
      std::size_t p = leftmost_redex(w);
      if (p == npos) {
        result.add(to_monomial(w), node.mapped());
        continue;
      }
      for (auto& [nw, c] : rewrite_at(w, p)) add(pending, nw, c * node.mapped());
    }
    return result;
  }

  Element reduce(const Word& w) const {
    Combo c;
    add(c, w, e_->field().from_int(1));
    return reduce(std::move(c));
  }

  Word word_of(const Monomial& m) const {
    Word w{a_letter(m.a)};
    for (std::size_t i = 0; i < e_->lie_dim(); ++i)
      for (unsigned t = 0; t < pexp::get(m.g, i); ++t) w.push_back(g_letter(i));
    return w;
  }

  /// Product by concatenation and full reduction.
  Element multiply(const Element& u, const Element& v) const {
    Combo c;
    for (const auto& [mu, cu] : u)
      for (const auto& [mv, cv] : v) {
        Word w = word_of(mu);
        Word tail = word_of(mv);
        w.insert(w.end(), tail.begin(), tail.end());
        add(c, std::move(w), cu * cv);
      }
    return reduce(std::move(c));
  }

  std::string render(const Word& w) const {
    std::string s;
    for (std::size_t p = 0; p < w.size(); ++p) {
      if (p) s += "·";
      s += w[p].gen ? e_->lie().label(w[p].id) : "(" + e_->base().name(w[p].id) + ")";
    }
    return s;
  }

  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

 private:
  static bool reducible(const Letter& l, const Letter& r) {
    if (!r.gen) return true;  // A-letter after anything
    return l.gen && l.id > r.id;
  }

  static void add(Combo& c, Word w, const Scalar& v) {
    if (v.is_zero()) return;
    auto [it, inserted] = c.emplace(std::move(w), v);
    if (!inserted) {
      it->second += v;
      if (it->second.is_zero()) c.erase(it);
    }
  }

  Monomial to_monomial(const Word& w) const {
    Monomial m{e_->base().unit(), 0};
    std::size_t p = 0;
    if (!w.empty() && !w[0].gen) {
      m.a = w[0].id;
      p = 1;
    }
    for (; p < w.size(); ++p) m.g = pexp::inc(m.g, w[p].id);
    return m;
  }

  std::shared_ptr<const CrossedProduct> e_;
};

/// Resolves every critical overlap of the rewriting system both ways:
///   y_i y_j y_k (i > j > k), y_i y_j a (i > j), y_i a b.
/// For S(V) the A-letters range over monomials of low degree, which
/// suffices because both the action and the multiplication are determined
/// by the generators.
inline ValidationReport validate_presentation(std::shared_ptr<const CrossedProduct> e) {
  ValidationReport report;
  WordReducer red(e);
  using L = WordReducer::Letter;
  const AKey unit = e->base().unit();
  std::vector<AKey> letters;
  std::vector<AKey> pair_letters;
  if (e->base().is_finite()) {
    const auto& fa = dynamic_cast<const FiniteAlgebra&>(e->base());
    for (std::size_t i = 0; i < fa.dim(); ++i) letters.push_back(i);
    pair_letters = letters;
  } else {
    const auto& pa = dynamic_cast<const PolynomialAlgebra&>(e->base());
    letters = pa.monomials_up_to(2);
    pair_letters = pa.monomials_up_to(1);
  }
  auto check = [&](const std::string& name, const WordReducer::Word& w, std::size_t p, std::size_t q) {
    WordReducer::Word full{WordReducer::a_letter(unit)};
    full.insert(full.end(), w.begin(), w.end());
    Element left = red.reduce(red.rewrite_at(full, p + 1));
    Element right = red.reduce(red.rewrite_at(full, q + 1));
    if (left != right) report.push_back({name, red.render(w), e->render(left), e->render(right)});
  };
  const std::size_t d = e->lie_dim();
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < i; ++j) {
      for (std::size_t k = 0; k < j; ++k)
        check("overlap-ggg", {L{true, i}, L{true, j}, L{true, k}}, 0, 1);
      for (AKey a : letters) check("overlap-gga", {L{true, i}, L{true, j}, L{false, a}}, 0, 1);
    }
  for (std::size_t i = 0; i < d; ++i)
    for (AKey a : pair_letters)
      for (AKey b : pair_letters) check("overlap-gaa", {L{true, i}, L{false, a}, L{false, b}}, 0, 1);
  return report;
}

inline ValidationReport validate_presentation(const AlgebraData& data) {
  return validate_presentation(CrossedProduct::from_data(data));
}

}  // namespace difop
