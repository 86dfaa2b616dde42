#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

#include "gage/dense_matrix.hpp"

namespace gage {

struct QrResult {
  DenseMatrix q;  // N x F, orthonormal columns
  DenseMatrix r;  // F x F, upper triangular, nonnegative diagonal
  /// Columns whose residual vanished; their Q columns were redrawn at random.
  std::vector<std::size_t> deficient_columns;
};

/// Householder thin QR of a tall matrix (N >= F).
QrResult thin_qr(const DenseMatrix& w, std::uint64_t seed = 0);

/// Block operator on N x k matrices; must be symmetric positive semidefinite.
using BlockOperator = std::function<DenseMatrix(const DenseMatrix&)>;

struct OrthIterConfig {
  std::size_t rank = 1;
  double tol = 1e-8;
  std::size_t max_iter = 300;
  std::uint64_t seed = 0;
  /// Guard columns iterated alongside the requested rank. The returned basis
  /// is the top-`rank` Ritz subspace; guard columns only speed convergence.
  /// kAutoOversample picks max(8, rank / 4).
  std::size_t oversample = kAutoOversample;

  static constexpr std::size_t kAutoOversample = static_cast<std::size_t>(-1);

  void validate() const;
};

struct OrthIterResult {
  DenseMatrix basis;                // N x rank, Ritz vectors ordered by descending Ritz value
  std::vector<double> ritz_values;  // descending
  std::size_t iterations = 0;
  bool converged = false;
  /// ||P_k - P_{k-1}||_F for the rank-dimensional projectors at exit.
  double subspace_change = 0.0;
};

/// Orthogonal (subspace) iteration for the dominant invariant subspace of a
/// symmetric PSD operator on R^n, with Rayleigh-Ritz extraction.
OrthIterResult orth_iter(std::size_t n, const BlockOperator& apply, const OrthIterConfig& cfg);

struct SymmetricEigen {
  std::vector<double> values;  // descending
  DenseMatrix vectors;         // columns; largest-magnitude entry of each is positive
};

/// Dense symmetric eigendecomposition (Householder tridiagonalization + implicit QL).
SymmetricEigen sym_evd_small(const DenseMatrix& a);

struct GeneralEigen {
  std::vector<double> values;  // real parts, descending
  DenseMatrix vectors;         // unit-norm columns
  /// Set when complex conjugate pairs occurred; each pair is represented by the
  /// real and imaginary parts of one eigenvector and the shared real part.
  bool complex_pairs = false;
};

/// Eigendecomposition of a small real non-symmetric matrix
/// (Hessenberg reduction + shifted QR).
GeneralEigen eig_general_small(const DenseMatrix& m);

}  // namespace gage
