#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace gage {

/// Row-major dense matrix of doubles.
///
/// Every allocation is reported to the allocation probe so tests can assert
/// that sparse code paths never materialize an N x N intermediate.
class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(std::size_t rows, std::size_t cols, double fill = 0.0);
  DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> data);

  DenseMatrix(const DenseMatrix& other);
  DenseMatrix& operator=(const DenseMatrix& other);
  DenseMatrix(DenseMatrix&&) noexcept = default;
  DenseMatrix& operator=(DenseMatrix&&) noexcept = default;

  static DenseMatrix identity(std::size_t n);
  static DenseMatrix from_rows(std::initializer_list<std::initializer_list<double>> rows);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t size() const noexcept { return data_.size(); }
  bool empty() const noexcept { return data_.empty(); }

  double& operator()(std::size_t i, std::size_t j) noexcept { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const noexcept { return data_[i * cols_ + j]; }

  std::span<double> row(std::size_t i) noexcept { return {data_.data() + i * cols_, cols_}; }
  std::span<const double> row(std::size_t i) const noexcept {
    return {data_.data() + i * cols_, cols_};
  }
  std::span<double> data() noexcept { return data_; }
  std::span<const double> data() const noexcept { return data_; }

  std::vector<double> column(std::size_t j) const;
  void set_column(std::size_t j, std::span<const double> values);

  DenseMatrix transposed() const;
  double frobenius_norm() const noexcept;
  bool all_finite() const noexcept;

  bool operator==(const DenseMatrix& other) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

DenseMatrix matmul(const DenseMatrix& a, const DenseMatrix& b);
/// a^T * b without forming the transpose.
DenseMatrix matmul_tn(const DenseMatrix& a, const DenseMatrix& b);
/// a * b^T without forming the transpose.
DenseMatrix matmul_nt(const DenseMatrix& a, const DenseMatrix& b);

DenseMatrix operator+(const DenseMatrix& a, const DenseMatrix& b);
DenseMatrix operator-(const DenseMatrix& a, const DenseMatrix& b);
DenseMatrix operator*(double s, const DenseMatrix& a);
DenseMatrix& operator+=(DenseMatrix& a, const DenseMatrix& b);

/// ||a - b||_F / max(||b||_F, tiny)
double relative_difference(const DenseMatrix& a, const DenseMatrix& b);

std::vector<double> column_norms(const DenseMatrix& a);
/// Right-multiplies by diag(d).
DenseMatrix scale_columns(const DenseMatrix& a, std::span<const double> d);

namespace alloc_probe {
/// Largest element count of any DenseMatrix allocated since the last reset.
std::size_t peak_elements() noexcept;
void reset() noexcept;
}  // namespace alloc_probe

}  // namespace gage
