#include "gage/kernels.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <thread>
#include <vector>

#include "gage/errors.hpp"

namespace gage {

namespace {

std::atomic<unsigned> g_threads{1};

constexpr std::size_t kMinRowsPerThread = 2048;

void spmm_rows(const SparseMatrix& s, const DenseMatrix& b, DenseMatrix& out, std::size_t first,
               std::size_t last) {
  const auto row_ptr = s.row_ptr();
  const auto col_idx = s.col_idx();
  const auto values = s.values();
  const std::size_t f = b.cols();
  for (std::size_t i = first; i < last; ++i) {
    double* dst = out.row(i).data();
    for (std::size_t k = row_ptr[i]; k < row_ptr[i + 1]; ++k) {
      const double v = values[k];
      const double* src = b.row(col_idx[k]).data();
      for (std::size_t j = 0; j < f; ++j) dst[j] += v * src[j];
    }
  }
}

// Lower Cholesky factor in place; returns false on a pivot below `floor`.
bool cholesky(DenseMatrix& l, double floor) {
  const std::size_t n = l.rows();
  for (std::size_t j = 0; j < n; ++j) {
    double d = l(j, j);
    for (std::size_t k = 0; k < j; ++k) d -= l(j, k) * l(j, k);
    if (!(d > floor)) return false;
    const double root = std::sqrt(d);
    l(j, j) = root;
    for (std::size_t i = j + 1; i < n; ++i) {
      double v = l(i, j);
      for (std::size_t k = 0; k < j; ++k) v -= l(i, k) * l(j, k);
      l(i, j) = v / root;
    }
  }
  return true;
}

DenseMatrix cholesky_solve(const DenseMatrix& l, const DenseMatrix& rhs) {
  // Row-oriented substitution: every right-hand side advances together, so the
  // inner loops run over contiguous rows of x.
  const std::size_t n = l.rows();
  const std::size_t m = rhs.cols();
  DenseMatrix x = rhs;
  for (std::size_t i = 0; i < n; ++i) {
    auto xi = x.row(i);
    for (std::size_t k = 0; k < i; ++k) {
      const double lik = l(i, k);
      const auto xk = x.row(k);
      for (std::size_t c = 0; c < m; ++c) xi[c] -= lik * xk[c];
    }
    const double d = l(i, i);
    for (std::size_t c = 0; c < m; ++c) xi[c] /= d;
  }
  for (std::size_t i = n; i-- > 0;) {
    auto xi = x.row(i);
    for (std::size_t k = i + 1; k < n; ++k) {
      const double lki = l(k, i);
      const auto xk = x.row(k);
      for (std::size_t c = 0; c < m; ++c) xi[c] -= lki * xk[c];
    }
    const double d = l(i, i);
    for (std::size_t c = 0; c < m; ++c) xi[c] /= d;
  }
  return x;
}

std::optional<DenseMatrix> try_factor(const DenseMatrix& gram, double shift, double floor) {
  const std::size_t n = gram.rows();
  DenseMatrix l(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j <= i; ++j) l(i, j) = gram(i, j);
  for (std::size_t i = 0; i < n; ++i) l(i, i) += shift;
  if (!cholesky(l, floor)) return std::nullopt;
  return l;
}

}  // namespace

void set_num_threads(unsigned threads) { g_threads.store(std::max(1u, threads)); }
unsigned num_threads() noexcept { return g_threads.load(); }

DenseMatrix spmm(const SparseMatrix& s, const DenseMatrix& b) {
  if (s.n_cols() != b.rows()) throw std::invalid_argument("spmm: S.n_cols != B.n_rows");
  DenseMatrix out(s.n_rows(), b.cols());
  const std::size_t rows = s.n_rows();
  const unsigned threads =
      static_cast<unsigned>(std::min<std::size_t>(num_threads(), rows / kMinRowsPerThread + 1));
  if (threads <= 1) {
    spmm_rows(s, b, out, 0, rows);
    return out;
  }
  std::vector<std::thread> pool;
  const std::size_t block = (rows + threads - 1) / threads;
  for (unsigned t = 0; t < threads; ++t) {
    const std::size_t first = t * block;
    const std::size_t last = std::min(rows, first + block);
    if (first >= last) break;
    pool.emplace_back([&, first, last] { spmm_rows(s, b, out, first, last); });
  }
  for (auto& th : pool) th.join();
  return out;
}

DenseMatrix spmm_transposed(const SparseMatrix& s, const DenseMatrix& b) {
  if (s.n_rows() != b.rows()) throw std::invalid_argument("spmm_transposed: S.n_rows != B.n_rows");
  DenseMatrix out(s.n_cols(), b.cols());
  const auto row_ptr = s.row_ptr();
  const auto col_idx = s.col_idx();
  const auto values = s.values();
  const std::size_t f = b.cols();
  for (std::size_t i = 0; i < s.n_rows(); ++i) {
    const double* src = b.row(i).data();
    for (std::size_t k = row_ptr[i]; k < row_ptr[i + 1]; ++k) {
      const double v = values[k];
      double* dst = out.row(col_idx[k]).data();
      for (std::size_t j = 0; j < f; ++j) dst[j] += v * src[j];
    }
  }
  return out;
}

DenseMatrix dense_gram(const DenseMatrix& a) {
  const std::size_t f = a.cols();
  DenseMatrix g(f, f);
  for (std::size_t r = 0; r < a.rows(); ++r) {
    const auto row = a.row(r);
    for (std::size_t i = 0; i < f; ++i) {
      const double ai = row[i];
      if (ai == 0.0) continue;
      auto g_row = g.row(i);
      for (std::size_t j = i; j < f; ++j) g_row[j] += ai * row[j];
    }
  }
  for (std::size_t i = 0; i < f; ++i)
    for (std::size_t j = 0; j < i; ++j) g(i, j) = g(j, i);
  return g;
}

DenseMatrix hadamard(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw std::invalid_argument("hadamard: shape mismatch");
  }
  DenseMatrix out = a;
  auto od = out.data();
  const auto bd = b.data();
  for (std::size_t i = 0; i < od.size(); ++i) od[i] *= bd[i];
  return out;
}

SpdSolve solve_spd(const DenseMatrix& gram, const DenseMatrix& rhs) {
  const std::size_t n = gram.rows();
  if (gram.cols() != n) throw std::invalid_argument("solve_spd: G must be square");
  if (rhs.rows() != n) throw std::invalid_argument("solve_spd: RHS row count mismatch");
  if (!gram.all_finite() || !rhs.all_finite()) {
    throw NumericalError("solve_spd: non-finite input");
  }
  if (n == 0) return {DenseMatrix(0, rhs.cols()), false, 0.0};

  double max_diag = 0.0;
  double trace = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    max_diag = std::max(max_diag, gram(i, i));
    trace += gram(i, i);
  }
  const double floor = 1e-12 * max_diag;
  if (auto l = try_factor(gram, 0.0, floor)) return {cholesky_solve(*l, rhs), false, 0.0};

  const double ridge = 1e-9 * trace / static_cast<double>(n);
  if (ridge > 0.0) {
    if (auto l = try_factor(gram, ridge, 0.0)) return {cholesky_solve(*l, rhs), true, ridge};
  }
  throw NumericalError("solve_spd: matrix is singular or indefinite beyond ridge repair");
}

}  // namespace gage
