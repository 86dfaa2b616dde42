#include <gtest/gtest.h>

#include <cmath>
#include <stdexcept>

#include "gage/centered_gram.hpp"
#include "gage/errors.hpp"
#include "gage/spectral.hpp"
#include "support/oracle.hpp"

using namespace gage;
using namespace gage::testing;

namespace {

// Symmetric operator with prescribed spectrum in a random orthonormal basis.
struct ConstructedSpectrum {
  Eigen::MatrixXd q;
  Eigen::VectorXd values;
  Eigen::MatrixXd dense() const { return q * values.asDiagonal() * q.transpose(); }
};

ConstructedSpectrum constructed(Eigen::Index n, std::uint64_t seed, double gap, Eigen::Index f) {
  ConstructedSpectrum s;
  s.q = Eigen::HouseholderQR<Eigen::MatrixXd>(gaussian(n, n, seed)).householderQ();
  s.values.resize(n);
  // top f values in [2, 3], then a relative gap, then a decaying tail
  for (Eigen::Index i = 0; i < n; ++i) {
    s.values(i) = i < f ? 3.0 - static_cast<double>(i) / static_cast<double>(f)
                        : (2.0 + 1.0 / static_cast<double>(f)) * (1.0 - gap) *
                              std::pow(0.97, static_cast<double>(i - f));
  }
  return s;
}

BlockOperator dense_operator(const Eigen::MatrixXd& a) {
  return [a](const DenseMatrix& b) { return from_eigen(a * to_eigen(b)); };
}

}  // namespace

TEST(ThinQr, OrthonormalInputGivesIdentityR) {
  const Eigen::MatrixXd w = Eigen::HouseholderQR<Eigen::MatrixXd>(gaussian(10, 3, 1)).householderQ() *
                            Eigen::MatrixXd::Identity(10, 3);
  const QrResult qr = thin_qr(from_eigen(w));
  EXPECT_LT((to_eigen(qr.r) - Eigen::MatrixXd::Identity(3, 3)).norm(), 1e-13);
  EXPECT_LT(rel_err(to_eigen(qr.q), w), 1e-13);
}

TEST(ThinQr, SingleScaledBasisColumn) {
  const QrResult qr = thin_qr(DenseMatrix::from_rows({{2}, {0}, {0}}));
  EXPECT_NEAR(qr.q(0, 0), 1.0, 1e-15);
  EXPECT_NEAR(qr.q(1, 0), 0.0, 1e-15);
  EXPECT_NEAR(qr.r(0, 0), 2.0, 1e-15);
}

TEST(ThinQr, RandomResiduals) {
  const Eigen::MatrixXd w = gaussian(50, 5, 2);
  const QrResult qr = thin_qr(from_eigen(w));
  const Eigen::MatrixXd q = to_eigen(qr.q), r = to_eigen(qr.r);
  EXPECT_LT((q.transpose() * q - Eigen::MatrixXd::Identity(5, 5)).norm(), 1e-12);
  EXPECT_LT(rel_err(q * r, w), 1e-11);
  for (int i = 0; i < 5; ++i) {
    EXPECT_GE(r(i, i), 0.0);
    for (int j = 0; j < i; ++j) EXPECT_EQ(r(i, j), 0.0);
  }
  EXPECT_TRUE(qr.deficient_columns.empty());
}

TEST(ThinQr, RankDeficientColumnsRedrawn) {
  Eigen::MatrixXd w = gaussian(12, 4, 3);
  w.col(2) = 2.0 * w.col(0) - w.col(1);
  w.col(3).setZero();
  const QrResult qr = thin_qr(from_eigen(w), 99);
  EXPECT_EQ(qr.deficient_columns, (std::vector<std::size_t>{2, 3}));
  const Eigen::MatrixXd q = to_eigen(qr.q), r = to_eigen(qr.r);
  EXPECT_LT((q.transpose() * q - Eigen::MatrixXd::Identity(4, 4)).norm(), 1e-12);
  EXPECT_LT(rel_err(q * r, w), 1e-11);
  EXPECT_LT(std::abs(r(2, 2)), 1e-12);
  EXPECT_EQ(r(3, 3), 0.0);
}

TEST(ThinQr, WideInputRejected) {
  EXPECT_THROW(thin_qr(DenseMatrix(2, 3)), std::invalid_argument);
}

TEST(OrthIter, DiagonalOperator) {
  Eigen::MatrixXd a = Eigen::VectorXd::LinSpaced(5, 5, 1).asDiagonal();
  OrthIterConfig cfg;
  cfg.rank = 2;
  const OrthIterResult res = orth_iter(5, dense_operator(a), cfg);
  EXPECT_TRUE(res.converged);
  EXPECT_LT(max_principal_angle(to_eigen(res.basis), Eigen::MatrixXd::Identity(5, 2)), 1e-8);
  EXPECT_NEAR(res.ritz_values[0], 5.0, 1e-12);
  EXPECT_NEAR(res.ritz_values[1], 4.0, 1e-12);
}

TEST(OrthIter, IdentityOperator) {
  OrthIterConfig cfg;
  cfg.rank = 1;
  const OrthIterResult res = orth_iter(6, [](const DenseMatrix& b) { return b; }, cfg);
  EXPECT_TRUE(res.converged);
  const Eigen::VectorXd q = to_eigen(res.basis).col(0);
  EXPECT_NEAR(q.norm(), 1.0, 1e-14);
  EXPECT_NEAR(res.ritz_values[0], 1.0, 1e-14);
}

TEST(OrthIter, SlabSquaresMatchDenseEigensolver) {
  // X1^2 + X2^2 from random sparse factors, checked only where the gap is >= 0.05.
  int checked = 0;
  for (std::uint64_t seed = 0; seed < 40 && checked < 5; ++seed) {
    const auto y1 = random_graph(40, 0.15, 500 + seed);
    const auto y2 = random_sparse(40, 25, 0.2, 600 + seed);
    const Eigen::MatrixXd x1 = dense_slab(y1), x2 = dense_slab(y2);
    const Eigen::MatrixXd a = x1 * x1 + x2 * x2;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a);
    const auto& ev = es.eigenvalues();
    const Eigen::Index f = 4;
    const double gap = (ev(40 - f) - ev(40 - f - 1)) / ev(40 - f);
    if (gap < 0.05) continue;
    ++checked;
    const CenteredGramOperator op1(y1), op2(y2);
    OrthIterConfig cfg;
    cfg.rank = f;
    cfg.seed = seed;
    const OrthIterResult res = orth_iter(
        40, [&](const DenseMatrix& b) { return squared_apply(op1, b) + squared_apply(op2, b); },
        cfg);
    EXPECT_TRUE(res.converged);
    EXPECT_LT(max_principal_angle(to_eigen(res.basis), top_eigenvectors(a, f)), 1e-7)
        << "seed " << seed;
  }
  EXPECT_GE(checked, 3);
}

TEST(OrthIter, SeedInvariantWithGap) {
  const auto s = constructed(60, 4, 0.05, 5);
  OrthIterConfig cfg;
  cfg.rank = 5;
  cfg.seed = 1;
  const auto a = orth_iter(60, dense_operator(s.dense()), cfg);
  cfg.seed = 12345;
  const auto b = orth_iter(60, dense_operator(s.dense()), cfg);
  EXPECT_TRUE(a.converged && b.converged);
  EXPECT_LT(max_principal_angle(to_eigen(a.basis), to_eigen(b.basis)), 1e-7);
  EXPECT_LT(max_principal_angle(to_eigen(a.basis), s.q.leftCols(5)), 1e-7);
}

TEST(OrthIter, ConvergedResidualBound) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto s = constructed(50, 10 + seed, 0.1, 3);
    OrthIterConfig cfg;
    cfg.rank = 3;
    cfg.seed = seed;
    const auto res = orth_iter(50, dense_operator(s.dense()), cfg);
    ASSERT_TRUE(res.converged);
    const Eigen::MatrixXd q = to_eigen(res.basis);
    const Eigen::MatrixXd aq = s.dense() * q;
    EXPECT_LT((aq - q * (q.transpose() * aq)).norm() / aq.norm(), 10 * cfg.tol);
  }
}

TEST(OrthIter, ReportsNonConvergence) {
  const auto s = constructed(30, 7, 0.01, 2);
  OrthIterConfig cfg;
  cfg.rank = 2;
  cfg.max_iter = 2;
  cfg.tol = 1e-15;
  const auto res = orth_iter(30, dense_operator(s.dense()), cfg);
  EXPECT_FALSE(res.converged);
  EXPECT_EQ(res.iterations, 2u);
}

TEST(OrthIter, OperatorShapeChecked) {
  OrthIterConfig cfg;
  cfg.rank = 2;
  EXPECT_THROW(orth_iter(8, [](const DenseMatrix& b) { return DenseMatrix(b.rows() + 1, b.cols()); },
                         cfg),
               std::invalid_argument);
  cfg.rank = 0;
  EXPECT_THROW(orth_iter(8, [](const DenseMatrix& b) { return b; }, cfg), std::invalid_argument);
}

TEST(SymEvd, Diagonal) {
  const SymmetricEigen e = sym_evd_small(DenseMatrix::from_rows({{3, 0}, {0, 1}}));
  EXPECT_EQ(e.values, (std::vector<double>{3, 1}));
  EXPECT_LT(relative_difference(e.vectors, DenseMatrix::identity(2)), 1e-15);
}

TEST(SymEvd, TwoByTwoSwap) {
  const SymmetricEigen e = sym_evd_small(DenseMatrix::from_rows({{0, 1}, {1, 0}}));
  EXPECT_NEAR(e.values[0], 1.0, 1e-15);
  EXPECT_NEAR(e.values[1], -1.0, 1e-15);
  const double r = 1.0 / std::sqrt(2.0);
  EXPECT_NEAR(std::abs(e.vectors(0, 0)), r, 1e-15);
  EXPECT_NEAR(e.vectors(0, 0) * e.vectors(1, 0), 0.5, 1e-15);
  EXPECT_NEAR(e.vectors(0, 1) * e.vectors(1, 1), -0.5, 1e-15);
}

TEST(SymEvd, RandomResidual) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const Eigen::MatrixXd m = gaussian(8, 8, seed);
    const Eigen::MatrixXd a = m + m.transpose();
    const SymmetricEigen e = sym_evd_small(from_eigen(a));
    const Eigen::MatrixXd v = to_eigen(e.vectors);
    const Eigen::VectorXd l = Eigen::Map<const Eigen::VectorXd>(e.values.data(), 8);
    EXPECT_LT((a * v - v * l.asDiagonal()).norm(), 1e-10 * a.norm());
    EXPECT_LT((v.transpose() * v - Eigen::MatrixXd::Identity(8, 8)).norm(), 1e-12);
    for (int i = 1; i < 8; ++i) EXPECT_GE(e.values[i - 1], e.values[i]);
  }
}

TEST(SymEvd, NonSymmetricRejected) {
  EXPECT_THROW(sym_evd_small(DenseMatrix::from_rows({{1, 2}, {0, 1}})), std::invalid_argument);
}

TEST(EigGeneral, Diagonal) {
  const GeneralEigen e = eig_general_small(DenseMatrix::from_rows({{2, 0, 0}, {0, 7, 0}, {0, 0, 4}}));
  EXPECT_EQ(e.values, (std::vector<double>{7, 4, 2}));
  EXPECT_FALSE(e.complex_pairs);
  // columns are permuted unit vectors
  const Eigen::MatrixXd v = to_eigen(e.vectors).cwiseAbs();
  EXPECT_NEAR(v(1, 0), 1.0, 1e-15);
  EXPECT_NEAR(v(2, 1), 1.0, 1e-15);
  EXPECT_NEAR(v(0, 2), 1.0, 1e-15);
}

TEST(EigGeneral, SimilarityTransform) {
  const Eigen::MatrixXd p = gaussian(2, 2, 21) + 2.0 * Eigen::MatrixXd::Identity(2, 2);
  const Eigen::MatrixXd m = p * Eigen::Vector2d(2, 5).asDiagonal() * p.inverse();
  const GeneralEigen e = eig_general_small(from_eigen(m));
  EXPECT_NEAR(e.values[0], 5.0, 1e-8);
  EXPECT_NEAR(e.values[1], 2.0, 1e-8);
  const Eigen::MatrixXd v = to_eigen(e.vectors);
  // column k parallel to P's column for the same eigenvalue
  EXPECT_NEAR(std::abs(v.col(0).dot(p.col(1).normalized())), 1.0, 1e-8);
  EXPECT_NEAR(std::abs(v.col(1).dot(p.col(0).normalized())), 1.0, 1e-8);
}

TEST(EigGeneral, ComplexPairFlagged) {
  // eigenvalues 1 +- i
  const GeneralEigen e = eig_general_small(DenseMatrix::from_rows({{1, -1}, {1, 1}}));
  EXPECT_TRUE(e.complex_pairs);
  EXPECT_NEAR(e.values[0], 1.0, 1e-12);
  EXPECT_NEAR(e.values[1], 1.0, 1e-12);
}

TEST(EigGeneral, NonFiniteRejected) {
  EXPECT_THROW(eig_general_small(DenseMatrix::from_rows({{1, NAN}, {0, 1}})), NumericalError);
}

TEST(EigGeneral, JointDiagonalizationRecoversFactors) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const Eigen::MatrixXd m = gaussian(4, 4, 40 + seed);
    Eigen::VectorXd l1(4), l2(4);
    l1 << 1.0, 1.7, 2.9, 0.6;
    l2 << 2.2, 0.8, 1.1, 3.0;
    const Eigen::MatrixXd s1 = m * l1.asDiagonal() * m.transpose();
    const Eigen::MatrixXd s2 = m * l2.asDiagonal() * m.transpose();
    const Eigen::MatrixXd pencil = s2 * s1.inverse();
    const GeneralEigen e = eig_general_small(from_eigen(pencil));
    ASSERT_FALSE(e.complex_pairs);
    // eigenvectors of S2 S1^{-1} are the columns of M
    EXPECT_GT(match_columns(to_eigen(e.vectors), m).min_congruence, 0.999) << "seed " << seed;
  }
}
