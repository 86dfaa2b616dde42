#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "gage/dense_matrix.hpp"

namespace gage {

struct Triplet {
  std::size_t row = 0;
  std::size_t col = 0;
  double value = 0.0;
};

/// Compressed sparse row matrix in canonical form: column indices strictly
/// increasing within each row and no stored zeros.
class SparseMatrix {
 public:
  SparseMatrix() : row_ptr_(1, 0) {}
  SparseMatrix(std::size_t n_rows, std::size_t n_cols);

  /// Duplicate (row, col) entries are summed; entries summing to zero are dropped.
  static SparseMatrix from_triplets(std::size_t n_rows, std::size_t n_cols,
                                    std::vector<Triplet> entries);
  /// Validates the CSR invariants; throws std::invalid_argument on violation.
  static SparseMatrix from_csr(std::size_t n_rows, std::size_t n_cols,
                               std::vector<std::size_t> row_ptr,
                               std::vector<std::size_t> col_idx, std::vector<double> values);
  static SparseMatrix from_dense(const DenseMatrix& dense);

  std::size_t n_rows() const noexcept { return n_rows_; }
  std::size_t n_cols() const noexcept { return n_cols_; }
  std::size_t nnz() const noexcept { return values_.size(); }

  std::span<const std::size_t> row_ptr() const noexcept { return row_ptr_; }
  std::span<const std::size_t> col_idx() const noexcept { return col_idx_; }
  std::span<const double> values() const noexcept { return values_; }

  std::size_t row_nnz(std::size_t i) const noexcept { return row_ptr_[i + 1] - row_ptr_[i]; }
  /// Value at (i, j), zero when not stored.
  double at(std::size_t i, std::size_t j) const;

  DenseMatrix to_dense() const;
  SparseMatrix transposed() const;
  std::vector<Triplet> triplets() const;
  bool is_symmetric() const;

  bool operator==(const SparseMatrix& other) const = default;

 private:
  std::size_t n_rows_ = 0;
  std::size_t n_cols_ = 0;
  std::vector<std::size_t> row_ptr_;
  std::vector<std::size_t> col_idx_;
  std::vector<double> values_;
};

}  // namespace gage
