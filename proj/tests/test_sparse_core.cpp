#include <gtest/gtest.h>

#include <cmath>
#include <stdexcept>

#include "gage/errors.hpp"
#include "gage/kernels.hpp"
#include "gage/sparse_matrix.hpp"
#include "support/oracle.hpp"

using namespace gage;
using gage::testing::from_eigen;
using gage::testing::gaussian;
using gage::testing::random_sparse;
using gage::testing::rel_err;
using gage::testing::to_eigen;

TEST(SparseMatrix, TripletsAreCanonicalized) {
  // unsorted, a duplicate pair and an explicit zero
  auto s = SparseMatrix::from_triplets(
      3, 4, {{2, 1, 1.0}, {0, 3, 2.0}, {0, 1, 1.5}, {0, 3, -0.5}, {1, 0, 0.0}});
  EXPECT_EQ(s.nnz(), 3u);
  const std::vector<std::size_t> rp(s.row_ptr().begin(), s.row_ptr().end());
  EXPECT_EQ(rp, (std::vector<std::size_t>{0, 2, 2, 3}));
  EXPECT_DOUBLE_EQ(s.at(0, 3), 1.5);
  EXPECT_DOUBLE_EQ(s.at(0, 1), 1.5);
  EXPECT_DOUBLE_EQ(s.at(1, 0), 0.0);
}

TEST(SparseMatrix, CancellingDuplicatesLeaveNoStoredZero) {
  auto s = SparseMatrix::from_triplets(2, 2, {{0, 0, 1.0}, {0, 0, -1.0}});
  EXPECT_EQ(s.nnz(), 0u);
}

TEST(SparseMatrix, RejectsOutOfRangeAndNonFinite) {
  EXPECT_THROW(SparseMatrix::from_triplets(2, 2, {{2, 0, 1.0}}), std::invalid_argument);
  EXPECT_THROW(SparseMatrix::from_triplets(2, 2, {{0, 0, NAN}}), std::invalid_argument);
}

TEST(SparseMatrix, CsrValidation) {
  EXPECT_NO_THROW(SparseMatrix::from_csr(2, 3, {0, 1, 2}, {2, 0}, {1.0, 2.0}));
  // decreasing row_ptr
  EXPECT_THROW(SparseMatrix::from_csr(2, 3, {0, 2, 1}, {0, 1}, {1.0, 2.0}),
               std::invalid_argument);
  // columns not strictly increasing within a row
  EXPECT_THROW(SparseMatrix::from_csr(1, 3, {0, 2}, {1, 1}, {1.0, 2.0}), std::invalid_argument);
  // stored zero
  EXPECT_THROW(SparseMatrix::from_csr(1, 3, {0, 1}, {1}, {0.0}), std::invalid_argument);
  // last offset != nnz
  EXPECT_THROW(SparseMatrix::from_csr(1, 3, {0, 1}, {0, 1}, {1.0, 1.0}), std::invalid_argument);
}

TEST(SparseMatrix, DenseRoundTripAndTranspose) {
  const auto s = random_sparse(9, 6, 0.3, 11);
  EXPECT_EQ(SparseMatrix::from_dense(s.to_dense()), s);
  EXPECT_EQ(to_eigen(s.transposed()), to_eigen(s).transpose());
  EXPECT_EQ(s.transposed().transposed(), s);
}

TEST(Spmm, IdentityLeavesBUnchanged) {
  const auto eye = SparseMatrix::from_dense(DenseMatrix::identity(3));
  const auto b = DenseMatrix::from_rows({{1, 2}, {3, 4}, {5, 6}});
  EXPECT_EQ(spmm(eye, b), b);
}

TEST(Spmm, ZeroMatrixGivesZero) {
  const SparseMatrix zero(3, 3);
  const auto b = DenseMatrix::from_rows({{1, 2}, {3, 4}, {5, 6}});
  EXPECT_EQ(spmm(zero, b), DenseMatrix(3, 2));
}

TEST(Spmm, HandExample) {
  const auto s = SparseMatrix::from_triplets(3, 3, {{0, 1, 2.0}, {2, 0, -1.0}});
  const auto r = spmm(s, DenseMatrix(3, 1, 1.0));
  EXPECT_EQ(r, DenseMatrix::from_rows({{2}, {0}, {-1}}));
}

TEST(Spmm, DimensionMismatchRejected) {
  EXPECT_THROW(spmm(SparseMatrix(3, 4), DenseMatrix(3, 2)), std::invalid_argument);
  EXPECT_THROW(spmm_transposed(SparseMatrix(3, 4), DenseMatrix(4, 2)), std::invalid_argument);
}

TEST(Spmm, ThreadCountDoesNotChangeBits) {
  const auto s = random_sparse(5000, 40, 0.05, 3);
  const DenseMatrix b = from_eigen(gaussian(40, 4, 5));
  set_num_threads(1);
  const DenseMatrix one = spmm(s, b);
  set_num_threads(3);
  const DenseMatrix three = spmm(s, b);
  set_num_threads(1);
  EXPECT_EQ(one, three);
}

TEST(SpmmTransposed, SymmetricMatchesSpmmExactly) {
  const auto a = random_sparse(12, 12, 0.3, 4);
  const auto sym = SparseMatrix::from_dense(from_eigen(to_eigen(a) + to_eigen(a).transpose()));
  const DenseMatrix b = from_eigen(gaussian(12, 3, 9));
  EXPECT_EQ(spmm_transposed(sym, b), spmm(sym, b));
}

TEST(SpmmTransposed, IdentityLeavesBUnchanged) {
  const auto eye = SparseMatrix::from_dense(DenseMatrix::identity(3));
  const auto b = DenseMatrix::from_rows({{1, 2}, {3, 4}, {5, 6}});
  EXPECT_EQ(spmm_transposed(eye, b), b);
}

TEST(SpmmTransposed, RandomAgainstDenseOracle) {
  const auto s = random_sparse(10, 7, 0.4, 21);
  const Eigen::MatrixXd b = gaussian(10, 3, 22);
  const auto got = to_eigen(spmm_transposed(s, from_eigen(b)));
  EXPECT_LT(rel_err(got, to_eigen(s).transpose() * b), 1e-12);
}

TEST(SpmmTransposed, PropertyOverRandomShapes) {
  for (std::uint64_t seed = 0; seed < 25; ++seed) {
    const std::size_t rows = 5 + seed * 3 % 90;
    const std::size_t cols = 3 + seed * 7 % 80;
    const auto s = random_sparse(rows, cols, 0.15, 100 + seed);
    const Eigen::MatrixXd b = gaussian(static_cast<Eigen::Index>(rows), 4, 200 + seed);
    const auto got = to_eigen(spmm_transposed(s, from_eigen(b)));
    const auto want = to_eigen(spmm(s.transposed(), from_eigen(b)));
    EXPECT_LT(rel_err(got, want), 1e-12) << "seed " << seed;
    EXPECT_LT(rel_err(got, to_eigen(s).transpose() * b), 1e-12) << "seed " << seed;
  }
}

TEST(DenseGram, OrthonormalColumnsGiveIdentity) {
  const Eigen::MatrixXd q = Eigen::HouseholderQR<Eigen::MatrixXd>(gaussian(8, 3, 1)).householderQ() *
                            Eigen::MatrixXd::Identity(8, 3);
  EXPECT_LT((to_eigen(dense_gram(from_eigen(q))) - Eigen::MatrixXd::Identity(3, 3)).norm(), 1e-14);
}

TEST(DenseGram, OnesColumnGivesN) {
  EXPECT_EQ(dense_gram(DenseMatrix(7, 1, 1.0)), DenseMatrix(1, 1, 7.0));
}

TEST(DenseGram, MatchesLoopOracleAndIsExactlySymmetric) {
  const DenseMatrix a = from_eigen(gaussian(5, 3, 2));
  const DenseMatrix g = dense_gram(a);
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_GE(g(i, i), 0.0);
    for (std::size_t j = 0; j < 3; ++j) {
      double want = 0.0;
      for (std::size_t k = 0; k < 5; ++k) want += a(k, i) * a(k, j);
      EXPECT_NEAR(g(i, j), want, 1e-12 * std::abs(want) + 1e-15);
      EXPECT_EQ(g(i, j), g(j, i));
    }
  }
}

TEST(Hadamard, Examples) {
  const DenseMatrix a = from_eigen(gaussian(3, 4, 6));
  EXPECT_EQ(hadamard(a, DenseMatrix(3, 4, 1.0)), a);
  EXPECT_EQ(hadamard(DenseMatrix(2, 2, 3.0), DenseMatrix(2, 2, 3.0)), DenseMatrix(2, 2, 9.0));
  const DenseMatrix b = from_eigen(gaussian(3, 4, 7));
  const DenseMatrix h = hadamard(a, b);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 4; ++j) EXPECT_EQ(h(i, j), a(i, j) * b(i, j));
  EXPECT_THROW(hadamard(a, DenseMatrix(4, 3)), std::invalid_argument);
}

TEST(SolveSpd, IdentityAndScaledIdentity) {
  const DenseMatrix rhs = from_eigen(gaussian(4, 2, 3));
  EXPECT_EQ(solve_spd(DenseMatrix::identity(4), rhs).solution, rhs);
  const auto half = solve_spd(2.0 * DenseMatrix::identity(3), DenseMatrix(3, 2, 1.0));
  EXPECT_FALSE(half.regularized);
  EXPECT_LT(relative_difference(half.solution, DenseMatrix(3, 2, 0.5)), 1e-15);
}

TEST(SolveSpd, RandomSpdResidual) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const Eigen::MatrixXd m = gaussian(6, 6, seed);
    const Eigen::MatrixXd g = m.transpose() * m + Eigen::MatrixXd::Identity(6, 6);
    const Eigen::MatrixXd rhs = gaussian(6, 3, seed + 50);
    const auto x = to_eigen(solve_spd(from_eigen(g), from_eigen(rhs)).solution);
    EXPECT_LT((g * x - rhs).norm() / rhs.norm(), 1e-10);
  }
}

TEST(SolveSpd, ReproducesKnownSolution) {
  const Eigen::MatrixXd m = gaussian(8, 8, 77);
  const Eigen::MatrixXd g = m.transpose() * m + 0.5 * Eigen::MatrixXd::Identity(8, 8);
  const Eigen::MatrixXd x = gaussian(8, 5, 78);
  const auto got = to_eigen(solve_spd(from_eigen(g), from_eigen(g * x)).solution);
  EXPECT_LT(rel_err(got, x), 1e-9);
}

TEST(SolveSpd, SingularGramFallsBackToRidge) {
  // rank-1 Gram: the plain factorization breaks down
  const DenseMatrix g = DenseMatrix::from_rows({{1, 1}, {1, 1}});
  const DenseMatrix rhs = DenseMatrix::from_rows({{1}, {1}});
  const SpdSolve s = solve_spd(g, rhs);
  EXPECT_TRUE(s.regularized);
  EXPECT_DOUBLE_EQ(s.ridge, 1e-9 * 2.0 / 2.0);
  // (G + eps I) x = rhs
  const double eps = s.ridge;
  EXPECT_NEAR((1 + eps) * s.solution(0, 0) + s.solution(1, 0), 1.0, 1e-9);
  EXPECT_NEAR(s.solution(0, 0), s.solution(1, 0), 1e-9);
}

TEST(SolveSpd, RejectsNonFinite) {
  DenseMatrix g = DenseMatrix::identity(2);
  g(1, 0) = NAN;
  EXPECT_THROW(solve_spd(g, DenseMatrix(2, 1, 1.0)), NumericalError);
  EXPECT_THROW(solve_spd(DenseMatrix::identity(2), DenseMatrix(2, 1, INFINITY)), NumericalError);
}

TEST(SolveSpd, ShapeMismatchRejected) {
  EXPECT_THROW(solve_spd(DenseMatrix(2, 3), DenseMatrix(2, 1)), std::invalid_argument);
  EXPECT_THROW(solve_spd(DenseMatrix::identity(2), DenseMatrix(3, 1)), std::invalid_argument);
}
