#include "gage/centered_gram.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "gage/kernels.hpp"
#include "gage/spectral.hpp"

namespace gage {

namespace {

// S^T S as a dense matrix, accumulated from pairs of nonzeros within each row.
DenseMatrix gram_of_rows(const SparseMatrix& s) {
  const std::size_t m = s.n_cols();
  DenseMatrix g(m, m);
  const auto row_ptr = s.row_ptr();
  const auto col_idx = s.col_idx();
  const auto values = s.values();
  for (std::size_t i = 0; i < s.n_rows(); ++i) {
    for (std::size_t a = row_ptr[i]; a < row_ptr[i + 1]; ++a) {
      const double va = values[a];
      auto g_row = g.row(col_idx[a]);
      for (std::size_t b = row_ptr[i]; b < row_ptr[i + 1]; ++b) g_row[col_idx[b]] += va * values[b];
    }
  }
  return g;
}

double sum_of_squares(const DenseMatrix& m) {
  double s = 0.0;
  for (double v : m.data()) s += v * v;
  return s;
}

}  // namespace

DenseMatrix center_apply(const DenseMatrix& b) {
  const std::size_t n = b.rows();
  if (n == 0) throw std::invalid_argument("center_apply: N must be positive");
  std::vector<double> means(b.cols(), 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const auto r = b.row(i);
    for (std::size_t j = 0; j < b.cols(); ++j) means[j] += r[j];
  }
  for (double& m : means) m /= static_cast<double>(n);
  DenseMatrix out = b;
  for (std::size_t i = 0; i < n; ++i) {
    auto r = out.row(i);
    for (std::size_t j = 0; j < out.cols(); ++j) r[j] -= means[j];
  }
  return out;
}

CenteredGramOperator::CenteredGramOperator(SparseMatrix y) : y_(std::move(y)) {
  if (y_.n_rows() == 0) throw std::invalid_argument("CenteredGramOperator: N must be positive");
}

DenseMatrix centered_coordinates(const CenteredGramOperator& op, const DenseMatrix& b) {
  if (b.rows() != op.n()) throw std::invalid_argument("centered_coordinates: B must have N rows");
  return spmm_transposed(op.factor(), center_apply(b));
}

DenseMatrix gram_apply(const CenteredGramOperator& op, const DenseMatrix& b) {
  if (b.rows() != op.n()) throw std::invalid_argument("gram_apply: B must have N rows");
  return center_apply(spmm(op.factor(), spmm_transposed(op.factor(), center_apply(b))));
}

DenseMatrix squared_apply(const CenteredGramOperator& op, const DenseMatrix& b) {
  if (b.rows() != op.n()) throw std::invalid_argument("squared_apply: B must have N rows");
  const SparseMatrix& y = op.factor();
  DenseMatrix t = center_apply(b);
  t = center_apply(spmm(y, spmm_transposed(y, t)));
  return center_apply(spmm(y, spmm_transposed(y, t)));
}

DenseMatrix project_small(const CenteredGramOperator& op, const DenseMatrix& v) {
  if (v.rows() != op.n()) throw std::invalid_argument("project_small: V must have N rows");
  return dense_gram(centered_coordinates(op, v));
}

double squared_frobenius_norm(const CenteredGramOperator& op) {
  const SparseMatrix& y = op.factor();
  const std::size_t n = op.n();
  if (op.factor_dim() <= n) {
    // ||J Y Y^T J||_F = ||Y^T J Y||_F and Y^T J Y = Y^T Y - (1/N) c c^T, c = Y^T 1.
    DenseMatrix g = gram_of_rows(y);
    const DenseMatrix sums = spmm_transposed(y, DenseMatrix(n, 1, 1.0));
    const double inv_n = 1.0 / static_cast<double>(n);
    for (std::size_t i = 0; i < g.rows(); ++i)
      for (std::size_t j = 0; j < g.cols(); ++j) g(i, j) -= inv_n * sums(i, 0) * sums(j, 0);
    return sum_of_squares(g);
  }
  // N < M: double-center Y Y^T directly.
  DenseMatrix k = gram_of_rows(y.transposed());
  return sum_of_squares(center_apply(center_apply(k).transposed()));
}

DenseMatrix mds_gram_from_distances(const DenseMatrix& d2) {
  const std::size_t n = d2.rows();
  if (d2.cols() != n) throw std::invalid_argument("mds_gram_from_distances: not square");
  if (n == 0) throw std::invalid_argument("mds_gram_from_distances: empty input");
  double scale = 0.0;
  for (double v : d2.data()) scale = std::max(scale, std::abs(v));
  for (std::size_t i = 0; i < n; ++i) {
    if (d2(i, i) < 0.0 || std::abs(d2(i, i)) > 1e-12 * scale) {
      throw std::invalid_argument("mds_gram_from_distances: diagonal must be zero");
    }
    for (std::size_t j = 0; j < i; ++j) {
      if (std::abs(d2(i, j) - d2(j, i)) > 1e-12 * scale) {
        throw std::invalid_argument("mds_gram_from_distances: matrix not symmetric");
      }
      if (d2(i, j) < 0.0) {
        throw std::invalid_argument("mds_gram_from_distances: negative squared distance");
      }
    }
  }
  // J D2 J = center columns, transpose (D2 symmetric), center again.
  DenseMatrix g = center_apply(center_apply(d2).transposed());
  for (double& v : g.data()) v *= -0.5;
  return g;
}

MdsEmbedding classical_mds(const DenseMatrix& gram, std::size_t rank) {
  const std::size_t n = gram.rows();
  if (rank > n) throw std::invalid_argument("classical_mds: rank exceeds N");
  const SymmetricEigen eig = sym_evd_small(gram);

  MdsEmbedding out{DenseMatrix(n, rank), std::vector<double>(rank), false};
  for (std::size_t f = 0; f < rank; ++f) {
    const double lambda = eig.values[f];
    out.eigenvalues[f] = lambda;
    if (lambda < 0.0) out.clamped_negative = true;
    const double root = std::sqrt(std::max(0.0, lambda));
    for (std::size_t i = 0; i < n; ++i) out.coordinates(i, f) = eig.vectors(i, f) * root;
  }
  return out;
}

}  // namespace gage
