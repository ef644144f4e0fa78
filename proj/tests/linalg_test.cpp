#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "slfr/harness.hpp"
#include "slfr/linalg.hpp"

using namespace slfr;

namespace {

FqMatrix ints(const FieldSpec& f, std::vector<std::vector<std::int64_t>> rows) { return FqMatrix::from_ints(f, rows); }

template <class Fn>
ErrorCode code_of(Fn&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no slfr::Error thrown";
  return ErrorCode::ParseError;
}

FqMatrix random_invertible(const FieldSpec& f, std::size_t n, std::mt19937_64& rng) {
  for (;;) {
    FqMatrix m = random_matrix(f, n, n, rng);
    if (!det(m).is_zero()) return m;
  }
}

}  // namespace

TEST(Linalg, Submatrix) {
  const auto& f = FieldSpec::get(7);
  const FqMatrix m = ints(f, {{1, 2, 3}, {4, 5, 6}, {0, 1, 2}});
  const std::vector<std::size_t> rows{0, 2}, cols{1};
  EXPECT_EQ(submatrix(m, rows, cols), ints(f, {{2}, {1}}));
  const FqMatrix empty = submatrix(m, {}, {});
  EXPECT_EQ(empty.rows(), 0u);
  EXPECT_EQ(empty.cols(), 0u);
  const std::vector<std::size_t> all{0, 1, 2};
  EXPECT_EQ(submatrix(m, all, all), m);
  const std::vector<std::size_t> bad{3};
  EXPECT_EQ(code_of([&] { (void)submatrix(m, bad, all); }), ErrorCode::IndexOutOfRange);
}

TEST(Linalg, DeterminantExamples) {
  const auto& f7 = FieldSpec::get(7);
  EXPECT_EQ(det(FqMatrix(f7, 0, 0)), f7.one());
  for (std::size_t n = 1; n <= 6; ++n) EXPECT_EQ(det(FqMatrix::identity(f7, n)), f7.one());
  EXPECT_EQ(det(ints(f7, {{1, 2}, {3, 4}})), FieldElement(f7, 5));
  EXPECT_EQ(oracle::det_by_permutations(ints(f7, {{1, 2}, {3, 4}})), FieldElement(f7, 5));
  EXPECT_EQ(code_of([&] { (void)det(FqMatrix(f7, 2, 3)); }), ErrorCode::NotSquare);
}

TEST(Linalg, DeterminantAgainstOracles) {
  std::mt19937_64 rng(11);
  for (std::uint32_t q : {2u, 3u, 4u, 5u, 7u, 9u, 16u}) {
    const auto& f = FieldSpec::of_order(q);
    for (std::size_t n = 0; n <= 5; ++n) {
      for (int trial = 0; trial < 30; ++trial) {
        const FqMatrix a = random_matrix(f, n, n, rng);
        const FqMatrix b = random_matrix(f, n, n, rng);
        const FieldElement d = det(a);
        ASSERT_EQ(d, oracle::det_by_permutations(a)) << f.name() << " n=" << n;
        ASSERT_EQ(d, oracle::det_by_laplace(a)) << f.name() << " n=" << n;
        ASSERT_EQ(det(a * b), d * det(b)) << f.name() << " n=" << n;
        ASSERT_EQ(det(a.transpose()), d);
        ASSERT_EQ(rank(a) == n, !d.is_zero());
      }
    }
  }
}

TEST(Linalg, Rank) {
  const auto& f2 = FieldSpec::get(2);
  EXPECT_EQ(rank(FqMatrix(f2, 3, 4)), 0u);
  EXPECT_EQ(rank(FqMatrix::identity(f2, 5)), 5u);
  EXPECT_EQ(rank(ints(f2, {{1, 1}, {1, 1}})), 1u);
  std::mt19937_64 rng(5);
  const auto& f5 = FieldSpec::get(5);
  for (int i = 0; i < 50; ++i) {
    const FqMatrix a = random_matrix(f5, 4, 2, rng);
    const FqMatrix b = random_matrix(f5, 2, 5, rng);
    EXPECT_LE(rank(a * b), std::min(rank(a), rank(b)));
    EXPECT_EQ(rank(a), rank(a.transpose()));
  }
}

TEST(Linalg, Solve) {
  const auto& f7 = FieldSpec::get(7);
  const FqMatrix b = ints(f7, {{1}, {2}, {3}});
  EXPECT_EQ(solve(FqMatrix::identity(f7, 3), b), b);
  EXPECT_EQ(solve(ints(f7, {{2}}), ints(f7, {{3}})), ints(f7, {{5}}));
  EXPECT_EQ(code_of([&] { (void)solve(ints(f7, {{1, 2}, {2, 4}}), ints(f7, {{1}, {1}})); }), ErrorCode::Singular);
  EXPECT_EQ(code_of([&] { (void)solve(ints(f7, {{1, 2}}), ints(f7, {{1}})); }), ErrorCode::NotSquare);
  EXPECT_EQ(code_of([&] { (void)solve(ints(f7, {{1}}), ints(f7, {{1}, {2}})); }), ErrorCode::DimensionMismatch);

  const auto& f5 = FieldSpec::get(5);
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 100; ++trial) {
    const FqMatrix a = random_invertible(f5, 4, rng);
    const FqMatrix rhs = random_matrix(f5, 4, 1, rng);
    EXPECT_EQ(a * solve(a, rhs), rhs);
  }
}

TEST(Linalg, Cramer) {
  const auto& f7 = FieldSpec::get(7);
  const FqMatrix b = ints(f7, {{4}, {5}, {6}});
  for (std::size_t i = 0; i < 3; ++i) EXPECT_EQ(cramer_component(FqMatrix::identity(f7, 3), b, i), b.at(i, 0));
  EXPECT_EQ(cramer_component(ints(f7, {{3}}), ints(f7, {{2}}), 0), FieldElement(f7, 2) / FieldElement(f7, 3));
  EXPECT_EQ(code_of([&] { (void)cramer_component(ints(f7, {{0}}), ints(f7, {{2}}), 0); }), ErrorCode::Singular);

  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 100; ++trial) {
    const FqMatrix a = random_invertible(f7, 3, rng);
    const FqMatrix rhs = random_matrix(f7, 3, 1, rng);
    const FqMatrix x = solve(a, rhs);
    for (std::size_t i = 0; i < 3; ++i) ASSERT_EQ(cramer_component(a, rhs, i), x.at(i, 0));
  }
}

TEST(Linalg, SolveGeneral) {
  const auto& f5 = FieldSpec::get(5);
  EXPECT_FALSE(solve_general(ints(f5, {{1, 1}, {2, 2}}), ints(f5, {{1}, {3}})).has_value());
  const auto sol = solve_general(ints(f5, {{1, 1, 0}, {0, 0, 1}}), ints(f5, {{2}, {3}}));
  ASSERT_TRUE(sol.has_value());
  EXPECT_EQ(sol->rank, 2u);
  EXPECT_EQ(sol->nullity, 1u);
  const FqMatrix x = FqMatrix::column(sol->particular);
  EXPECT_EQ(ints(f5, {{1, 1, 0}, {0, 0, 1}}) * x, ints(f5, {{2}, {3}}));
}

TEST(Linalg, RowReducePivots) {
  const auto& f3 = FieldSpec::get(3);
  const RowEchelon e = row_reduce(ints(f3, {{0, 1, 2}, {0, 2, 1}, {1, 0, 0}}));
  EXPECT_EQ(e.pivot_cols, (std::vector<std::size_t>{0, 1}));
}
