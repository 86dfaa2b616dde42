#include "gage/dense_matrix.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace gage {

namespace {

std::atomic<std::size_t> g_peak_elements{0};

void record_allocation(std::size_t elements) noexcept {
  std::size_t current = g_peak_elements.load(std::memory_order_relaxed);
  while (elements > current &&
         !g_peak_elements.compare_exchange_weak(current, elements, std::memory_order_relaxed)) {
  }
}

void require_same_shape(const DenseMatrix& a, const DenseMatrix& b, const char* what) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw std::invalid_argument(std::string(what) + ": shape mismatch (" +
                                std::to_string(a.rows()) + "x" + std::to_string(a.cols()) +
                                " vs " + std::to_string(b.rows()) + "x" +
                                std::to_string(b.cols()) + ")");
  }
}

}  // namespace

namespace alloc_probe {
std::size_t peak_elements() noexcept { return g_peak_elements.load(std::memory_order_relaxed); }
void reset() noexcept { g_peak_elements.store(0, std::memory_order_relaxed); }
}  // namespace alloc_probe

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), data_(rows * cols, fill) {
  record_allocation(data_.size());
}

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
  if (data_.size() != rows * cols) {
    throw std::invalid_argument("DenseMatrix: data length does not match shape");
  }
  record_allocation(data_.size());
}

DenseMatrix::DenseMatrix(const DenseMatrix& other)
    : rows_(other.rows_), cols_(other.cols_), data_(other.data_) {
  record_allocation(data_.size());
}

DenseMatrix& DenseMatrix::operator=(const DenseMatrix& other) {
  if (this != &other) {
    rows_ = other.rows_;
    cols_ = other.cols_;
    data_ = other.data_;
    record_allocation(data_.size());
  }
  return *this;
}

DenseMatrix DenseMatrix::identity(std::size_t n) {
  DenseMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

DenseMatrix DenseMatrix::from_rows(std::initializer_list<std::initializer_list<double>> rows) {
  const std::size_t r = rows.size();
  const std::size_t c = r == 0 ? 0 : rows.begin()->size();
  std::vector<double> data;
  data.reserve(r * c);
  for (const auto& row : rows) {
    if (row.size() != c) throw std::invalid_argument("DenseMatrix::from_rows: ragged rows");
    data.insert(data.end(), row.begin(), row.end());
  }
  return DenseMatrix(r, c, std::move(data));
}

std::vector<double> DenseMatrix::column(std::size_t j) const {
  std::vector<double> out(rows_);
  for (std::size_t i = 0; i < rows_; ++i) out[i] = (*this)(i, j);
  return out;
}

void DenseMatrix::set_column(std::size_t j, std::span<const double> values) {
  if (values.size() != rows_) throw std::invalid_argument("set_column: length mismatch");
  for (std::size_t i = 0; i < rows_; ++i) (*this)(i, j) = values[i];
}

DenseMatrix DenseMatrix::transposed() const {
  DenseMatrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

double DenseMatrix::frobenius_norm() const noexcept {
  double s = 0.0;
  for (double v : data_) s += v * v;
  return std::sqrt(s);
}

bool DenseMatrix::all_finite() const noexcept {
  return std::all_of(data_.begin(), data_.end(), [](double v) { return std::isfinite(v); });
}

DenseMatrix matmul(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.cols() != b.rows()) throw std::invalid_argument("matmul: inner dimension mismatch");
  DenseMatrix out(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    auto out_row = out.row(i);
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const double aik = a(i, k);
      if (aik == 0.0) continue;
      const auto b_row = b.row(k);
      for (std::size_t j = 0; j < b.cols(); ++j) out_row[j] += aik * b_row[j];
    }
  }
  return out;
}

DenseMatrix matmul_tn(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.rows() != b.rows()) throw std::invalid_argument("matmul_tn: row count mismatch");
  DenseMatrix out(a.cols(), b.cols());
  for (std::size_t k = 0; k < a.rows(); ++k) {
    const auto a_row = a.row(k);
    const auto b_row = b.row(k);
    for (std::size_t i = 0; i < a.cols(); ++i) {
      const double aki = a_row[i];
      if (aki == 0.0) continue;
      auto out_row = out.row(i);
      for (std::size_t j = 0; j < b.cols(); ++j) out_row[j] += aki * b_row[j];
    }
  }
  return out;
}

DenseMatrix matmul_nt(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.cols() != b.cols()) throw std::invalid_argument("matmul_nt: column count mismatch");
  DenseMatrix out(a.rows(), b.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    const auto a_row = a.row(i);
    for (std::size_t j = 0; j < b.rows(); ++j) {
      const auto b_row = b.row(j);
      double s = 0.0;
      for (std::size_t k = 0; k < a.cols(); ++k) s += a_row[k] * b_row[k];
      out(i, j) = s;
    }
  }
  return out;
}

DenseMatrix operator+(const DenseMatrix& a, const DenseMatrix& b) {
  DenseMatrix out = a;
  out += b;
  return out;
}

DenseMatrix& operator+=(DenseMatrix& a, const DenseMatrix& b) {
  require_same_shape(a, b, "operator+=");
  auto ad = a.data();
  const auto bd = b.data();
  for (std::size_t i = 0; i < ad.size(); ++i) ad[i] += bd[i];
  return a;
}

DenseMatrix operator-(const DenseMatrix& a, const DenseMatrix& b) {
  require_same_shape(a, b, "operator-");
  DenseMatrix out = a;
  auto od = out.data();
  const auto bd = b.data();
  for (std::size_t i = 0; i < od.size(); ++i) od[i] -= bd[i];
  return out;
}

DenseMatrix operator*(double s, const DenseMatrix& a) {
  DenseMatrix out = a;
  for (double& v : out.data()) v *= s;
  return out;
}

double relative_difference(const DenseMatrix& a, const DenseMatrix& b) {
  const double denom = std::max(b.frobenius_norm(), std::numeric_limits<double>::min());
  return (a - b).frobenius_norm() / denom;
}

std::vector<double> column_norms(const DenseMatrix& a) {
  std::vector<double> norms(a.cols(), 0.0);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    const auto r = a.row(i);
    for (std::size_t j = 0; j < a.cols(); ++j) norms[j] += r[j] * r[j];
  }
  for (double& n : norms) n = std::sqrt(n);
  return norms;
}

DenseMatrix scale_columns(const DenseMatrix& a, std::span<const double> d) {
  if (d.size() != a.cols()) throw std::invalid_argument("scale_columns: length mismatch");
  DenseMatrix out = a;
  for (std::size_t i = 0; i < out.rows(); ++i) {
    auto r = out.row(i);
    for (std::size_t j = 0; j < out.cols(); ++j) r[j] *= d[j];
  }
  return out;
}

}  // namespace gage
