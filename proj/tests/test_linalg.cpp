#include <gtest/gtest.h>

#include <random>

#include "difop/linalg.hpp"

using namespace difop;

namespace {

SparseVector dense(std::initializer_list<long> xs) {
  std::vector<SparseVector::Entry> e;
  std::size_t i = 0;
  for (long x : xs) {
    if (x != 0) e.emplace_back(i, Scalar(x));
    ++i;
  }
  return SparseVector::from_entries(std::move(e));
}

SparseMatrix random_matrix(std::mt19937_64& rng, std::size_t rows, std::size_t cols) {
  std::uniform_int_distribution<long> d(-5, 5);
  std::vector<std::vector<long>> m(rows, std::vector<long>(cols));
  for (auto& row : m)
    for (auto& x : row) x = d(rng);
  return SparseMatrix::from_dense(m, cols);
}

}  // namespace

TEST(Scalar, RationalsInLowestTerms) {
  Scalar a(mpq_class(6, 4));
  EXPECT_EQ(a.str(), "3/2");
  Scalar b(mpq_class(2, -4));
  EXPECT_EQ(b.rational().get_den(), 2);
  EXPECT_LT(b.rational(), 0);
  EXPECT_EQ(a + b, Scalar(1));
}

TEST(Scalar, BigIntegersDoNotOverflow) {
  Scalar x(1);
  for (int i = 0; i < 100; ++i) x *= Scalar(1000000007L);
  Scalar y = x / Scalar(1000000007L);
  EXPECT_FALSE(x == y);
  EXPECT_EQ(y * Scalar(1000000007L), x);
}

TEST(Scalar, PrimeFieldResidues) {
  Field f = Field::prime(7);
  Scalar a = f.from_int(-1);
  EXPECT_EQ(a.residue().value, 6u);
  EXPECT_TRUE((a * f.from_int(6)).is_one());
  EXPECT_EQ(f.parse_scalar("1/3") * f.from_int(3), f.from_int(1));
  EXPECT_TRUE(f.from_int(14).is_zero());
}

TEST(Scalar, FieldParsingRejectsComposites) {
  EXPECT_THROW(Field::parse("fp:4"), std::invalid_argument);
  EXPECT_THROW(Field::parse("reals"), std::invalid_argument);
  EXPECT_EQ(Field::parse("fp:10007").characteristic(), 10007u);
  EXPECT_TRUE(Field::parse("rationals").is_rational());
  try {
    Field::prime(4);
    FAIL();
  } catch (const std::invalid_argument& e) {
    EXPECT_NE(std::string(e.what()).find("not prime"), std::string::npos);
  }
}

TEST(SparseVector, NoStoredZerosAndSortedIndices) {
  auto v = SparseVector::from_entries({{3, Scalar(1)}, {1, Scalar(2)}, {3, Scalar(-1)}, {0, Scalar(0)}});
  ASSERT_EQ(v.size(), 1u);
  EXPECT_EQ(v.entries()[0].first, 1u);
  auto w = v.axpy(Scalar(-2), SparseVector::unit(1));
  EXPECT_TRUE(w.empty());
}

TEST(Rank, Examples) {
  EXPECT_EQ(rank(SparseMatrix::identity(2)), 2u);
  EXPECT_EQ(rank(SparseMatrix::from_dense({{1, 1}, {1, 1}}, 2)), 1u);
  Field f3 = Field::prime(3);
  EXPECT_EQ(rank(SparseMatrix::from_dense({{2, 0}, {0, 3}}, 2, f3), f3), 1u);
}

TEST(Kernel, Examples) {
  EXPECT_EQ(kernel_basis(SparseMatrix(2, 3)).size(), 3u);
  EXPECT_TRUE(kernel_basis(SparseMatrix::identity(4)).empty());
  auto k = kernel_basis(SparseMatrix::from_dense({{1, 1}}, 2));
  ASSERT_EQ(k.size(), 1u);
  EXPECT_EQ(k[0].at(0), -k[0].at(1));
  EXPECT_FALSE(k[0].empty());
}

TEST(Solve, Examples) {
  auto x = solve(SparseMatrix::identity(2), dense({5, 7}));
  ASSERT_TRUE(x);
  EXPECT_EQ(*x, dense({5, 7}));
  auto m = SparseMatrix::from_dense({{1, 1}, {1, 1}}, 2);
  EXPECT_FALSE(solve(m, dense({1, 2})));
  auto y = solve(m, dense({1, 1}));
  ASSERT_TRUE(y);
  EXPECT_EQ(y->at(0) + y->at(1), Scalar(1));
}

TEST(Solve, DimensionMismatch) {
  EXPECT_THROW(solve(SparseMatrix::identity(2), SparseVector::unit(5)), std::invalid_argument);
}

TEST(LinalgProperties, RankNullityAndKernelVectors) {
  std::mt19937_64 rng(1);
  for (int t = 0; t < 60; ++t) {
    std::size_t rows = 1 + rng() % 6, cols = 1 + rng() % 6;
    auto m = random_matrix(rng, rows, cols);
    auto k = kernel_basis(m);
    EXPECT_EQ(rank(m) + k.size(), cols);
    for (const auto& v : k) EXPECT_TRUE(m.multiply(v).empty());
  }
}

TEST(LinalgProperties, RankOverPrimeFieldsNeverExceedsRational) {
  std::mt19937_64 rng(2);
  int equal = 0;
  for (int t = 0; t < 60; ++t) {
    std::size_t rows = 1 + rng() % 6, cols = 1 + rng() % 6;
    auto m = random_matrix(rng, rows, cols);
    std::size_t rq = rank(m);
    for (std::uint64_t p : {1009u, 10007u}) {
      Field f = Field::prime(p);
      SparseMatrix mp(rows, cols);
      for (std::size_t i = 0; i < rows; ++i) {
        std::vector<SparseVector::Entry> e;
        for (const auto& [j, c] : m.row(i)) e.emplace_back(j, f.coerce(c));
        mp.set_row(i, SparseVector::from_entries(std::move(e)));
      }
      std::size_t rp = rank(mp, f);
      EXPECT_LE(rp, rq);
      if (rp == rq) ++equal;
    }
  }
  // small entries: large primes essentially never divide a pivot product
  EXPECT_GE(equal, 110);
}

TEST(LinalgProperties, EliminationIsDeterministic) {
  std::mt19937_64 rng(3);
  auto m = random_matrix(rng, 5, 7);
  auto a = kernel_basis(m), b = kernel_basis(m);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(a[i], b[i]);
}

TEST(RowEchelon, SpanMembership) {
  RowEchelon e(3);
  EXPECT_TRUE(e.add(dense({1, 2, 0})));
  EXPECT_TRUE(e.add(dense({0, 1, 1})));
  EXPECT_FALSE(e.add(dense({1, 3, 1})));
  EXPECT_TRUE(e.in_span(dense({2, 5, 1})));
  EXPECT_FALSE(e.in_span(dense({0, 0, 1})));
  EXPECT_EQ(e.rank(), 2u);
}
