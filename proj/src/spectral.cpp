#include "gage/spectral.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

#include "gage/errors.hpp"
#include "gage/rng.hpp"

namespace gage {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

// Reflector v (unit norm) with (I - 2 v v^T) x = alpha e_1.
double make_reflector(std::span<const double> x, std::vector<double>& v) {
  double norm = 0.0;
  for (double xi : x) norm += xi * xi;
  norm = std::sqrt(norm);
  const double alpha = x[0] >= 0.0 ? -norm : norm;
  v.assign(x.begin(), x.end());
  v[0] -= alpha;
  double vnorm = 0.0;
  for (double vi : v) vnorm += vi * vi;
  vnorm = std::sqrt(vnorm);
  if (vnorm == 0.0) {
    std::fill(v.begin(), v.end(), 0.0);
    return alpha;
  }
  for (double& vi : v) vi /= vnorm;
  return alpha;
}

// Applies (I - 2 v v^T) to rows [offset, offset + v.size()) of columns [col0, cols).
void reflect(DenseMatrix& a, std::span<const double> v, std::size_t offset, std::size_t col0) {
  const std::size_t cols = a.cols();
  std::vector<double> dots(cols - col0, 0.0);
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double vi = v[i];
    if (vi == 0.0) continue;
    const auto row = a.row(offset + i);
    for (std::size_t j = col0; j < cols; ++j) dots[j - col0] += vi * row[j];
  }
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double vi2 = 2.0 * v[i];
    if (vi2 == 0.0) continue;
    auto row = a.row(offset + i);
    for (std::size_t j = col0; j < cols; ++j) row[j] -= vi2 * dots[j - col0];
  }
}

void check_symmetric(const DenseMatrix& a, const char* who) {
  if (a.rows() != a.cols()) throw std::invalid_argument(std::string(who) + ": matrix not square");
  double scale = 0.0;
  for (double v : a.data()) scale = std::max(scale, std::abs(v));
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < i; ++j)
      if (std::abs(a(i, j) - a(j, i)) > 1e-10 * scale) {
        throw std::invalid_argument(std::string(who) + ": matrix not symmetric");
      }
}

void normalize_sign(DenseMatrix& vecs, std::size_t col) {
  std::size_t arg = 0;
  double best = -1.0;
  for (std::size_t i = 0; i < vecs.rows(); ++i) {
    // Small tolerance keeps the pick stable when two entries tie in magnitude.
    if (std::abs(vecs(i, col)) > best * (1.0 + 1e-12)) {
      best = std::abs(vecs(i, col));
      arg = i;
    }
  }
  if (vecs(arg, col) < 0.0)
    for (std::size_t i = 0; i < vecs.rows(); ++i) vecs(i, col) = -vecs(i, col);
}

// Householder tridiagonalization followed by implicit QL with accumulation
// (the classical tred2/tql2 pair). `v` holds the input and returns eigenvectors.
void tridiagonal_ql(std::vector<std::vector<double>>& v, std::vector<double>& d,
                    std::vector<double>& e) {
  const int n = static_cast<int>(v.size());
  for (int j = 0; j < n; ++j) d[j] = v[n - 1][j];

  for (int i = n - 1; i > 0; --i) {
    double scale = 0.0;
    double h = 0.0;
    for (int k = 0; k < i; ++k) scale += std::abs(d[k]);
    if (scale == 0.0) {
      e[i] = d[i - 1];
      for (int j = 0; j < i; ++j) {
        d[j] = v[i - 1][j];
        v[i][j] = 0.0;
        v[j][i] = 0.0;
      }
    } else {
      for (int k = 0; k < i; ++k) {
        d[k] /= scale;
        h += d[k] * d[k];
      }
      double f = d[i - 1];
      double g = std::sqrt(h);
      if (f > 0) g = -g;
      e[i] = scale * g;
      h -= f * g;
      d[i - 1] = f - g;
      for (int j = 0; j < i; ++j) e[j] = 0.0;
      for (int j = 0; j < i; ++j) {
        f = d[j];
        v[j][i] = f;
        g = e[j] + v[j][j] * f;
        for (int k = j + 1; k <= i - 1; ++k) {
          g += v[k][j] * d[k];
          e[k] += v[k][j] * f;
        }
        e[j] = g;
      }
      f = 0.0;
      for (int j = 0; j < i; ++j) {
        e[j] /= h;
        f += e[j] * d[j];
      }
      const double hh = f / (h + h);
      for (int j = 0; j < i; ++j) e[j] -= hh * d[j];
      for (int j = 0; j < i; ++j) {
        f = d[j];
        g = e[j];
        for (int k = j; k <= i - 1; ++k) v[k][j] -= (f * e[k] + g * d[k]);
        d[j] = v[i - 1][j];
        v[i][j] = 0.0;
      }
    }
    d[i] = h;
  }

  for (int i = 0; i < n - 1; ++i) {
    v[n - 1][i] = v[i][i];
    v[i][i] = 1.0;
    const double h = d[i + 1];
    if (h != 0.0) {
      for (int k = 0; k <= i; ++k) d[k] = v[k][i + 1] / h;
      for (int j = 0; j <= i; ++j) {
        double g = 0.0;
        for (int k = 0; k <= i; ++k) g += v[k][i + 1] * v[k][j];
        for (int k = 0; k <= i; ++k) v[k][j] -= g * d[k];
      }
    }
    for (int k = 0; k <= i; ++k) v[k][i + 1] = 0.0;
  }
  for (int j = 0; j < n; ++j) {
    d[j] = v[n - 1][j];
    v[n - 1][j] = 0.0;
  }
  v[n - 1][n - 1] = 1.0;
  e[0] = 0.0;

  for (int i = 1; i < n; ++i) e[i - 1] = e[i];
  e[n - 1] = 0.0;

  double f = 0.0;
  double tst1 = 0.0;
  for (int l = 0; l < n; ++l) {
    tst1 = std::max(tst1, std::abs(d[l]) + std::abs(e[l]));
    int m = l;
    while (m < n) {
      if (std::abs(e[m]) <= kEps * tst1) break;
      ++m;
    }
    if (m > l) {
      int iter = 0;
      do {
        if (++iter > 100) throw NumericalError("sym_evd_small: QL iteration did not converge");
        double g = d[l];
        double p = (d[l + 1] - g) / (2.0 * e[l]);
        double r = std::hypot(p, 1.0);
        if (p < 0) r = -r;
        d[l] = e[l] / (p + r);
        d[l + 1] = e[l] * (p + r);
        const double dl1 = d[l + 1];
        double h = g - d[l];
        for (int i = l + 2; i < n; ++i) d[i] -= h;
        f += h;

        p = d[m];
        double c = 1.0;
        double c2 = c;
        double c3 = c;
        const double el1 = e[l + 1];
        double s = 0.0;
        double s2 = 0.0;
        for (int i = m - 1; i >= l; --i) {
          c3 = c2;
          c2 = c;
          s2 = s;
          g = c * e[i];
          h = c * p;
          r = std::hypot(p, e[i]);
          e[i + 1] = s * r;
          s = e[i] / r;
          c = p / r;
          p = c * d[i] - s * g;
          d[i + 1] = h + s * (c * g + s * d[i]);
          for (int k = 0; k < n; ++k) {
            h = v[k][i + 1];
            v[k][i + 1] = s * v[k][i] + c * h;
            v[k][i] = c * v[k][i] - s * h;
          }
        }
        p = -s * s2 * c3 * el1 * e[l] / dl1;
        e[l] = s * p;
        d[l] = c * p;
      } while (std::abs(e[l]) > kEps * tst1);
    }
    d[l] += f;
    e[l] = 0.0;
  }
}

}  // namespace

QrResult thin_qr(const DenseMatrix& w, std::uint64_t seed) {
  const std::size_t n = w.rows();
  const std::size_t f = w.cols();
  if (n < f) throw std::invalid_argument("thin_qr: requires rows >= cols");
  if (!w.all_finite()) throw NumericalError("thin_qr: non-finite input");

  DenseMatrix a = w;
  const double threshold = 64.0 * kEps * w.frobenius_norm();
  std::vector<std::vector<double>> reflectors(f);
  std::vector<std::size_t> deficient;
  Rng rng(seed);

  for (std::size_t j = 0; j < f; ++j) {
    std::vector<double> x(n - j);
    double norm = 0.0;
    for (std::size_t i = j; i < n; ++i) {
      x[i - j] = a(i, j);
      norm += x[i - j] * x[i - j];
    }
    norm = std::sqrt(norm);
    auto& v = reflectors[j];
    if (norm <= threshold) {
      // No new direction in this column: pick one at random among the
      // directions orthogonal to the columns already fixed.
      deficient.push_back(j);
      std::vector<double> r(n - j);
      for (double& ri : r) ri = rng.normal();
      make_reflector(r, v);
      reflect(a, v, j, j);
      for (std::size_t i = j + 1; i < n; ++i) a(i, j) = 0.0;
    } else {
      const double alpha = make_reflector(x, v);
      reflect(a, v, j, j + 1);
      a(j, j) = alpha;
      for (std::size_t i = j + 1; i < n; ++i) a(i, j) = 0.0;
    }
  }

  DenseMatrix q(n, f);
  for (std::size_t j = 0; j < f; ++j) q(j, j) = 1.0;
  for (std::size_t j = f; j-- > 0;) reflect(q, reflectors[j], j, 0);

  DenseMatrix r(f, f);
  for (std::size_t i = 0; i < f; ++i)
    for (std::size_t j = i; j < f; ++j) r(i, j) = a(i, j);
  for (std::size_t j = 0; j < f; ++j) {
    if (r(j, j) < 0.0) {
      for (std::size_t k = j; k < f; ++k) r(j, k) = -r(j, k);
      for (std::size_t i = 0; i < n; ++i) q(i, j) = -q(i, j);
    }
  }
  return {std::move(q), std::move(r), std::move(deficient)};
}

void OrthIterConfig::validate() const {
  if (rank < 1) throw std::invalid_argument("OrthIterConfig: rank must be >= 1");
  if (!(tol > 0.0)) throw std::invalid_argument("OrthIterConfig: tol must be > 0");
  if (max_iter < 1) throw std::invalid_argument("OrthIterConfig: max_iter must be >= 1");
}

OrthIterResult orth_iter(std::size_t n, const BlockOperator& apply, const OrthIterConfig& cfg) {
  cfg.validate();
  if (cfg.rank > n) throw std::invalid_argument("orth_iter: rank exceeds dimension");
  const std::size_t guard =
      cfg.oversample == OrthIterConfig::kAutoOversample ? std::max<std::size_t>(8, cfg.rank / 4)
                                                        : cfg.oversample;
  const std::size_t block = std::min(n, cfg.rank + guard);

  DenseMatrix start(n, block);
  Rng rng(cfg.seed);
  for (double& v : start.data()) v = rng.normal();
  DenseMatrix q = thin_qr(start, Rng::derive(cfg.seed, 0)).q;

  OrthIterResult result;
  DenseMatrix previous;
  for (std::size_t it = 1; it <= cfg.max_iter; ++it) {
    DenseMatrix w = apply(q);
    if (w.rows() != n || w.cols() != block) {
      throw std::invalid_argument("orth_iter: operator returned wrong shape");
    }
    if (!w.all_finite()) throw NumericalError("orth_iter: operator produced non-finite values");

    DenseMatrix h = matmul_tn(q, w);
    for (std::size_t i = 0; i < block; ++i)
      for (std::size_t j = 0; j < i; ++j) h(i, j) = h(j, i) = 0.5 * (h(i, j) + h(j, i));
    const SymmetricEigen ritz = sym_evd_small(h);

    DenseMatrix top_vecs(block, cfg.rank);
    for (std::size_t i = 0; i < block; ++i)
      for (std::size_t j = 0; j < cfg.rank; ++j) top_vecs(i, j) = ritz.vectors(i, j);
    DenseMatrix top = matmul(q, top_vecs);

    result.iterations = it;
    result.ritz_values.assign(ritz.values.begin(),
                              ritz.values.begin() + static_cast<std::ptrdiff_t>(cfg.rank));
    // An exactly invariant block is done even when a degenerate spectrum keeps
    // the Ritz vectors from settling.
    DenseMatrix fit = matmul(w, top_vecs);
    double theta_max = 0.0;
    for (std::size_t j = 0; j < cfg.rank; ++j) {
      theta_max = std::max(theta_max, std::abs(ritz.values[j]));
      for (std::size_t i = 0; i < n; ++i) fit(i, j) -= ritz.values[j] * top(i, j);
    }
    if (fit.frobenius_norm() <= cfg.tol * theta_max) {
      result.converged = true;
      result.basis = std::move(top);
      return result;
    }
    if (!previous.empty()) {
      // ||P - P_prev||_F = sqrt(2) * ||(I - P_prev) top||_F for equal-rank projectors.
      const DenseMatrix residual = top - matmul(previous, matmul_tn(previous, top));
      result.subspace_change = std::sqrt(2.0) * residual.frobenius_norm();
      if (result.subspace_change < cfg.tol) {
        result.converged = true;
        result.basis = std::move(top);
        return result;
      }
    }
    previous = std::move(top);
    q = thin_qr(w, Rng::derive(cfg.seed, it)).q;
  }
  result.basis = std::move(previous);
  return result;
}

SymmetricEigen sym_evd_small(const DenseMatrix& a) {
  check_symmetric(a, "sym_evd_small");
  if (!a.all_finite()) throw NumericalError("sym_evd_small: non-finite input");
  const std::size_t n = a.rows();
  if (n == 0) return {{}, DenseMatrix()};

  std::vector<std::vector<double>> v(n, std::vector<double>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) v[i][j] = 0.5 * (a(i, j) + a(j, i));
  std::vector<double> d(n), e(n);
  tridiagonal_ql(v, d, e);

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return d[x] > d[y]; });

  SymmetricEigen out{std::vector<double>(n), DenseMatrix(n, n)};
  for (std::size_t j = 0; j < n; ++j) {
    out.values[j] = d[order[j]];
    for (std::size_t i = 0; i < n; ++i) out.vectors(i, j) = v[i][order[j]];
    normalize_sign(out.vectors, j);
  }
  return out;
}

GeneralEigen eig_general_small(const DenseMatrix& m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("eig_general_small: matrix not square");
  if (!m.all_finite()) throw NumericalError("eig_general_small: non-finite input");
  const auto n = static_cast<Eigen::Index>(m.rows());
  if (n == 0) return {};

  Eigen::MatrixXd em(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      em(i, j) = m(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
  Eigen::EigenSolver<Eigen::MatrixXd> solver(em, true);
  if (solver.info() != Eigen::Success) {
    throw NumericalError("eig_general_small: QR iteration did not converge");
  }
  const Eigen::VectorXcd vals = solver.eigenvalues();
  const Eigen::MatrixXcd vecs = solver.eigenvectors();

  // Each conjugate pair contributes (Re v, Im v) of its positive-imaginary member.
  struct Column {
    double value;
    std::vector<double> vec;
  };
  std::vector<Column> columns;
  bool complex_pairs = false;
  const double scale = std::max(1.0, em.cwiseAbs().maxCoeff());
  for (Eigen::Index k = 0; k < n; ++k) {
    const std::complex<double> lambda = vals(k);
    if (std::abs(lambda.imag()) <= 1e-12 * scale) {
      std::vector<double> v(static_cast<std::size_t>(n));
      for (Eigen::Index i = 0; i < n; ++i) v[static_cast<std::size_t>(i)] = vecs(i, k).real();
      columns.push_back({lambda.real(), std::move(v)});
    } else if (lambda.imag() > 0.0) {
      complex_pairs = true;
      std::vector<double> re(static_cast<std::size_t>(n)), im(static_cast<std::size_t>(n));
      for (Eigen::Index i = 0; i < n; ++i) {
        re[static_cast<std::size_t>(i)] = vecs(i, k).real();
        im[static_cast<std::size_t>(i)] = vecs(i, k).imag();
      }
      columns.push_back({lambda.real(), std::move(re)});
      columns.push_back({lambda.real(), std::move(im)});
    }
  }
  std::stable_sort(columns.begin(), columns.end(),
                   [](const Column& x, const Column& y) { return x.value > y.value; });

  GeneralEigen out{std::vector<double>(columns.size()),
                   DenseMatrix(static_cast<std::size_t>(n), columns.size()), complex_pairs};
  for (std::size_t j = 0; j < columns.size(); ++j) {
    out.values[j] = columns[j].value;
    double norm = 0.0;
    for (double x : columns[j].vec) norm += x * x;
    norm = std::sqrt(norm);
    for (std::size_t i = 0; i < columns[j].vec.size(); ++i) {
      out.vectors(i, j) = norm > 0.0 ? columns[j].vec[i] / norm : 0.0;
    }
    normalize_sign(out.vectors, j);
  }
  return out;
}

}  // namespace gage
