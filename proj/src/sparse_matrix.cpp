#include "gage/sparse_matrix.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace gage {

SparseMatrix::SparseMatrix(std::size_t n_rows, std::size_t n_cols)
    : n_rows_(n_rows), n_cols_(n_cols), row_ptr_(n_rows + 1, 0) {}

SparseMatrix SparseMatrix::from_triplets(std::size_t n_rows, std::size_t n_cols,
                                         std::vector<Triplet> entries) {
  for (const auto& t : entries) {
    if (t.row >= n_rows || t.col >= n_cols) {
      throw std::invalid_argument("SparseMatrix: entry (" + std::to_string(t.row) + "," +
                                  std::to_string(t.col) + ") outside " +
                                  std::to_string(n_rows) + "x" + std::to_string(n_cols));
    }
    if (!std::isfinite(t.value)) throw std::invalid_argument("SparseMatrix: non-finite value");
  }
  std::stable_sort(entries.begin(), entries.end(), [](const Triplet& a, const Triplet& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });

  SparseMatrix m(n_rows, n_cols);
  m.col_idx_.reserve(entries.size());
  m.values_.reserve(entries.size());
  std::size_t k = 0;
  while (k < entries.size()) {
    const std::size_t r = entries[k].row;
    const std::size_t c = entries[k].col;
    double sum = 0.0;
    while (k < entries.size() && entries[k].row == r && entries[k].col == c) {
      sum += entries[k].value;
      ++k;
    }
    if (sum != 0.0) {
      m.col_idx_.push_back(c);
      m.values_.push_back(sum);
      ++m.row_ptr_[r + 1];
    }
  }
  for (std::size_t i = 0; i < n_rows; ++i) m.row_ptr_[i + 1] += m.row_ptr_[i];
  return m;
}

SparseMatrix SparseMatrix::from_csr(std::size_t n_rows, std::size_t n_cols,
                                    std::vector<std::size_t> row_ptr,
                                    std::vector<std::size_t> col_idx, std::vector<double> values) {
  if (row_ptr.size() != n_rows + 1) throw std::invalid_argument("from_csr: row_ptr length");
  if (col_idx.size() != values.size()) throw std::invalid_argument("from_csr: col/value length");
  if (row_ptr.front() != 0 || row_ptr.back() != values.size()) {
    throw std::invalid_argument("from_csr: row_ptr endpoints");
  }
  for (std::size_t i = 0; i < n_rows; ++i) {
    if (row_ptr[i] > row_ptr[i + 1]) throw std::invalid_argument("from_csr: row_ptr decreasing");
    for (std::size_t k = row_ptr[i]; k < row_ptr[i + 1]; ++k) {
      if (col_idx[k] >= n_cols) throw std::invalid_argument("from_csr: column out of range");
      if (k > row_ptr[i] && col_idx[k] <= col_idx[k - 1]) {
        throw std::invalid_argument("from_csr: columns not strictly increasing");
      }
      if (values[k] == 0.0) throw std::invalid_argument("from_csr: explicit zero");
      if (!std::isfinite(values[k])) throw std::invalid_argument("from_csr: non-finite value");
    }
  }
  SparseMatrix m;
  m.n_rows_ = n_rows;
  m.n_cols_ = n_cols;
  m.row_ptr_ = std::move(row_ptr);
  m.col_idx_ = std::move(col_idx);
  m.values_ = std::move(values);
  return m;
}

SparseMatrix SparseMatrix::from_dense(const DenseMatrix& dense) {
  std::vector<Triplet> entries;
  for (std::size_t i = 0; i < dense.rows(); ++i)
    for (std::size_t j = 0; j < dense.cols(); ++j)
      if (dense(i, j) != 0.0) entries.push_back({i, j, dense(i, j)});
  return from_triplets(dense.rows(), dense.cols(), std::move(entries));
}

double SparseMatrix::at(std::size_t i, std::size_t j) const {
  const auto first = col_idx_.begin() + static_cast<std::ptrdiff_t>(row_ptr_[i]);
  const auto last = col_idx_.begin() + static_cast<std::ptrdiff_t>(row_ptr_[i + 1]);
  const auto it = std::lower_bound(first, last, j);
  if (it == last || *it != j) return 0.0;
  return values_[static_cast<std::size_t>(it - col_idx_.begin())];
}

DenseMatrix SparseMatrix::to_dense() const {
  DenseMatrix d(n_rows_, n_cols_);
  for (std::size_t i = 0; i < n_rows_; ++i)
    for (std::size_t k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) d(i, col_idx_[k]) = values_[k];
  return d;
}

SparseMatrix SparseMatrix::transposed() const {
  SparseMatrix t(n_cols_, n_rows_);
  t.col_idx_.resize(nnz());
  t.values_.resize(nnz());
  for (std::size_t c : col_idx_) ++t.row_ptr_[c + 1];
  for (std::size_t j = 0; j < n_cols_; ++j) t.row_ptr_[j + 1] += t.row_ptr_[j];
  std::vector<std::size_t> next(t.row_ptr_.begin(), t.row_ptr_.end() - 1);
  // Row-major traversal keeps the transposed columns sorted.
  for (std::size_t i = 0; i < n_rows_; ++i) {
    for (std::size_t k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) {
      const std::size_t dst = next[col_idx_[k]]++;
      t.col_idx_[dst] = i;
      t.values_[dst] = values_[k];
    }
  }
  return t;
}

std::vector<Triplet> SparseMatrix::triplets() const {
  std::vector<Triplet> out;
  out.reserve(nnz());
  for (std::size_t i = 0; i < n_rows_; ++i)
    for (std::size_t k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k)
      out.push_back({i, col_idx_[k], values_[k]});
  return out;
}

bool SparseMatrix::is_symmetric() const {
  if (n_rows_ != n_cols_) return false;
  return transposed() == *this;
}

}  // namespace gage
