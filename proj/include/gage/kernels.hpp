#pragma once

#include "gage/dense_matrix.hpp"
#include "gage/sparse_matrix.hpp"

namespace gage {

/// Worker threads used by spmm. Defaults to 1; results do not depend on it.
void set_num_threads(unsigned threads);
unsigned num_threads() noexcept;

/// S * B.
DenseMatrix spmm(const SparseMatrix& s, const DenseMatrix& b);

/// S^T * B, scattering along rows of S so the transpose is never built.
DenseMatrix spmm_transposed(const SparseMatrix& s, const DenseMatrix& b);

/// A^T * A. The upper triangle is mirrored so the result is exactly symmetric.
DenseMatrix dense_gram(const DenseMatrix& a);

DenseMatrix hadamard(const DenseMatrix& a, const DenseMatrix& b);

struct SpdSolve {
  DenseMatrix solution;
  bool regularized = false;
  double ridge = 0.0;
};

/// Solves G X = RHS for symmetric positive (semi)definite G by Cholesky,
/// reading only the lower triangle of G. When a pivot falls below
/// 1e-12 * max(diag G) the system is re-solved as (G + eps I) X = RHS with
/// eps = 1e-9 * trace(G) / F and the result is flagged.
SpdSolve solve_spd(const DenseMatrix& gram, const DenseMatrix& rhs);

}  // namespace gage
