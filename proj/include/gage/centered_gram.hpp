#pragma once

#include <cstddef>
#include <vector>

#include "gage/dense_matrix.hpp"
#include "gage/sparse_matrix.hpp"

namespace gage {

/// B - (1/N) 1 (1^T B): applies J = I - (1/N) 1 1^T as a rank-1 update.
DenseMatrix center_apply(const DenseMatrix& b);

/// Implicit X = J Y Y^T J for a sparse N x M factor Y. The dense N x N
/// matrix is never formed; every product costs O((nnz(Y) + N) F).
class CenteredGramOperator {
 public:
  explicit CenteredGramOperator(SparseMatrix y);

  std::size_t n() const noexcept { return y_.n_rows(); }
  std::size_t factor_dim() const noexcept { return y_.n_cols(); }
  const SparseMatrix& factor() const noexcept { return y_; }

 private:
  SparseMatrix y_;
};

/// X B.
DenseMatrix gram_apply(const CenteredGramOperator& op, const DenseMatrix& b);

/// X (X B), centering three times instead of four since J J = J.
DenseMatrix squared_apply(const CenteredGramOperator& op, const DenseMatrix& b);

/// Y^T J B, the M x F coordinates through which X factors as Z^T Z.
DenseMatrix centered_coordinates(const CenteredGramOperator& op, const DenseMatrix& b);

/// V^T X V, formed as Z^T Z with Z = Y^T J V so the result is exactly symmetric.
DenseMatrix project_small(const CenteredGramOperator& op, const DenseMatrix& v);

/// ||X||_F^2 computed exactly from the smaller of the two Gram forms.
double squared_frobenius_norm(const CenteredGramOperator& op);

/// -1/2 J D2 J for a matrix of squared distances.
DenseMatrix mds_gram_from_distances(const DenseMatrix& d2);

struct MdsEmbedding {
  DenseMatrix coordinates;           // N x F, U_F sqrt(Lambda_F)
  std::vector<double> eigenvalues;   // top F, before clamping
  bool clamped_negative = false;     // some of the top F eigenvalues were < 0
};

/// Classical MDS from a doubly centered Gram matrix.
MdsEmbedding classical_mds(const DenseMatrix& gram, std::size_t rank);

}  // namespace gage
