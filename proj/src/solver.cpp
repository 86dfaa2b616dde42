#include "gage/solver.hpp"

#include <Eigen/LU>
#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>
#include <string>

#include "gage/errors.hpp"
#include "gage/kernels.hpp"
#include "gage/rng.hpp"

namespace gage {

namespace {

constexpr std::size_t kExactNormLimit = 4096;
constexpr std::size_t kHutchinsonProbes = 64;
constexpr std::size_t kResidualBlock = 256;
constexpr double kDivergenceLimit = 1e150;

void require_compatible(const CenteredGramOperator& op1, const CenteredGramOperator& op2,
                        const char* who) {
  if (op1.n() != op2.n()) {
    throw std::invalid_argument(std::string(who) + ": operators disagree on node count");
  }
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

// Normalizes columns of `a` in place and returns the norms; zero columns are left alone.
std::vector<double> normalize_columns(DenseMatrix& a) {
  std::vector<double> norms = column_norms(a);
  std::vector<double> inv(norms.size());
  for (std::size_t j = 0; j < norms.size(); ++j) {
    inv[j] = norms[j] > 0.0 ? 1.0 / norms[j] : 1.0;
    if (norms[j] == 0.0) norms[j] = 1.0;
  }
  a = scale_columns(a, inv);
  return norms;
}

void scale_rows_of_c(DenseMatrix& c, const std::vector<double>& col_scale) {
  for (std::size_t k = 0; k < c.rows(); ++k)
    for (std::size_t f = 0; f < c.cols(); ++f) c(k, f) *= col_scale[f];
}

Eigen::MatrixXd to_eigen(const DenseMatrix& m) {
  Eigen::MatrixXd out(static_cast<Eigen::Index>(m.rows()), static_cast<Eigen::Index>(m.cols()));
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j)
      out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = m(i, j);
  return out;
}

DenseMatrix from_eigen(const Eigen::MatrixXd& m) {
  DenseMatrix out(static_cast<std::size_t>(m.rows()), static_cast<std::size_t>(m.cols()));
  for (std::size_t i = 0; i < out.rows(); ++i)
    for (std::size_t j = 0; j < out.cols(); ++j)
      out(i, j) = m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  return out;
}

// Solves G X^T = RHS (RHS is F x M) and returns X (M x F).
DenseMatrix solve_factor(const DenseMatrix& gram, const DenseMatrix& rhs, bool& regularized) {
  SpdSolve s = solve_spd(gram, rhs);
  regularized = regularized || s.regularized;
  return s.solution.transposed();
}

void check_finite(const DenseMatrix& m, const char* what, std::size_t sweep) {
  if (!m.all_finite()) {
    throw NumericalError(std::string("als_iterate: non-finite ") + what + " at sweep " +
                         std::to_string(sweep));
  }
  if (m.frobenius_norm() > kDivergenceLimit) {
    throw NumericalError(std::string("als_iterate: ") + what + " diverged at sweep " +
                         std::to_string(sweep));
  }
}

struct SlabError {
  double residual_sq = 0.0;
  double norm_sq = 0.0;
  bool estimated = false;
};

SlabError slab_error(const CenteredGramOperator& op, const CpdFactors& f, std::size_t slab,
                     std::uint64_t seed) {
  const std::size_t n = op.n();
  const std::size_t rank = f.rank();
  std::vector<double> weights(rank);
  for (std::size_t j = 0; j < rank; ++j) weights[j] = f.c(slab, j);
  const DenseMatrix weighted_u = scale_columns(f.u, weights);

  SlabError out;
  if (n <= kExactNormLimit) {
    // Direct residual, a block of columns at a time.
    for (std::size_t b0 = 0; b0 < n; b0 += kResidualBlock) {
      const std::size_t width = std::min(kResidualBlock, n - b0);
      DenseMatrix unit(n, width);
      DenseMatrix up_block(width, rank);
      for (std::size_t j = 0; j < width; ++j) {
        unit(b0 + j, j) = 1.0;
        for (std::size_t r = 0; r < rank; ++r) up_block(j, r) = f.u_prime(b0 + j, r);
      }
      const DenseMatrix x_block = gram_apply(op, unit);
      const DenseMatrix residual = x_block - matmul_nt(weighted_u, up_block);
      for (double v : x_block.data()) out.norm_sq += v * v;
      for (double v : residual.data()) out.residual_sq += v * v;
    }
    return out;
  }
  if (op.factor_dim() <= kExactNormLimit) {
    out.norm_sq = squared_frobenius_norm(op);
    const DenseMatrix z_u = centered_coordinates(op, f.u);
    const DenseMatrix z_up = centered_coordinates(op, f.u_prime);
    double cross = 0.0;
    for (std::size_t m = 0; m < z_u.rows(); ++m)
      for (std::size_t j = 0; j < rank; ++j) cross += weights[j] * z_u(m, j) * z_up(m, j);
    const DenseMatrix g = hadamard(dense_gram(f.u), dense_gram(f.u_prime));
    double model = 0.0;
    for (std::size_t i = 0; i < rank; ++i)
      for (std::size_t j = 0; j < rank; ++j) model += weights[i] * weights[j] * g(i, j);
    out.residual_sq = std::max(0.0, out.norm_sq - 2.0 * cross + model);
    return out;
  }
  // Rademacher probes estimate both ||X||^2 and ||X - U D U'^T||^2.
  Rng rng(Rng::derive(seed, slab));
  DenseMatrix probes(n, kHutchinsonProbes);
  for (double& v : probes.data()) v = (rng.next() >> 63) != 0 ? 1.0 : -1.0;
  const DenseMatrix xz = gram_apply(op, probes);
  const DenseMatrix residual = xz - matmul(weighted_u, matmul_tn(f.u_prime, probes));
  for (double v : xz.data()) out.norm_sq += v * v;
  for (double v : residual.data()) out.residual_sq += v * v;
  out.norm_sq /= static_cast<double>(kHutchinsonProbes);
  out.residual_sq /= static_cast<double>(kHutchinsonProbes);
  out.estimated = true;
  return out;
}

double relative_error(const SlabError& e) {
  if (e.norm_sq > 0.0) return std::sqrt(e.residual_sq / e.norm_sq);
  return std::sqrt(e.residual_sq);
}

}  // namespace

std::string_view to_string(InitMethod m) noexcept {
  switch (m) {
    case InitMethod::Evd: return "evd";
    case InitMethod::PaperBox: return "paper-box";
    case InitMethod::PaperText: return "paper-text";
    case InitMethod::Random: return "random";
  }
  return "evd";
}

InitMethod parse_init_method(std::string_view name) {
  if (name == "evd") return InitMethod::Evd;
  if (name == "paper-box") return InitMethod::PaperBox;
  if (name == "paper-text") return InitMethod::PaperText;
  if (name == "random") return InitMethod::Random;
  throw std::invalid_argument("unknown init method: " + std::string(name));
}

void SolverConfig::validate() const {
  if (rank < 1) throw std::invalid_argument("SolverConfig: rank must be >= 1");
  if (!(tol > 0.0)) throw std::invalid_argument("SolverConfig: tol must be > 0");
  if (max_iter < 1) throw std::invalid_argument("SolverConfig: max_iter must be >= 1");
  if (!(lambda >= 0.0 && lambda <= 1.0)) {
    throw std::invalid_argument("SolverConfig: lambda must lie in [0, 1]");
  }
  if (!(subspace_tol > 0.0) || subspace_max_iter < 1) {
    throw std::invalid_argument("SolverConfig: invalid subspace iteration settings");
  }
}

InitResult gage_evd_init(const CenteredGramOperator& op1, const CenteredGramOperator& op2,
                         std::size_t rank, const SolverConfig& cfg) {
  require_compatible(op1, op2, "gage_evd_init");
  const std::size_t n = op1.n();
  if (rank < 1 || rank + 1 > n) {
    throw std::invalid_argument("gage_evd_init: rank must satisfy 1 <= F <= N - 1");
  }

  InitResult out;
  if (cfg.init == InitMethod::Random) {
    Rng rng(cfg.seed);
    out.u0 = DenseMatrix(n, rank);
    for (double& v : out.u0.data()) v = rng.normal();
    return out;
  }

  OrthIterConfig oc;
  oc.rank = rank;
  oc.tol = cfg.subspace_tol;
  oc.max_iter = cfg.subspace_max_iter;
  oc.seed = cfg.seed;
  const OrthIterResult subspace = orth_iter(
      n,
      [&](const DenseMatrix& b) {
        DenseMatrix r = squared_apply(op1, b);
        r += squared_apply(op2, b);
        return r;
      },
      oc);
  out.subspace_iterations = subspace.iterations;
  out.subspace_converged = subspace.converged;
  const DenseMatrix& v = subspace.basis;

  const DenseMatrix s1 = project_small(op1, v);
  const DenseMatrix s2 = project_small(op2, v);

  DenseMatrix pencil;  // S2 S1^{-1} = (S1^{-1} S2)^T for symmetric S1, S2
  try {
    SpdSolve solved = solve_spd(s1, s2);
    out.regularized = solved.regularized;
    pencil = solved.solution.transposed();
  } catch (const NumericalError&) {
    out.degenerate = true;
    out.u0 = v;
    return out;
  }

  const GeneralEigen eig = eig_general_small(pencil);
  out.complex_pairs = eig.complex_pairs;
  const DenseMatrix& w = eig.vectors;

  DenseMatrix lift;
  if (cfg.init == InitMethod::Evd) {
    lift = w;
  } else {
    Eigen::FullPivLU<Eigen::MatrixXd> lu(to_eigen(w));
    if (!lu.isInvertible()) {
      out.degenerate = true;
      out.u0 = v;
      return out;
    }
    const DenseMatrix w_inv = from_eigen(lu.inverse());
    lift = cfg.init == InitMethod::PaperBox ? w_inv.transposed() : matmul(w_inv, s1).transposed();
  }
  out.u0 = matmul(v, lift);
  normalize_columns(out.u0);
  return out;
}

DenseMatrix krp_slab_product_mode12(const CenteredGramOperator& op1,
                                    const CenteredGramOperator& op2, const DenseMatrix& a,
                                    const DenseMatrix& c) {
  require_compatible(op1, op2, "krp_slab_product_mode12");
  if (a.rows() != op1.n()) throw std::invalid_argument("krp_slab_product_mode12: A must be N x F");
  if (c.rows() != 2 || c.cols() != a.cols()) {
    throw std::invalid_argument("krp_slab_product_mode12: C must be 2 x F");
  }
  const DenseMatrix p1 = gram_apply(op1, a);
  const DenseMatrix p2 = gram_apply(op2, a);
  DenseMatrix out(a.cols(), a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    const auto r1 = p1.row(i);
    const auto r2 = p2.row(i);
    for (std::size_t f = 0; f < a.cols(); ++f) out(f, i) = c(0, f) * r1[f] + c(1, f) * r2[f];
  }
  return out;
}

DenseMatrix krp_slab_product_mode3(const CenteredGramOperator& op1,
                                   const CenteredGramOperator& op2, const DenseMatrix& u,
                                   const DenseMatrix& u_prime) {
  require_compatible(op1, op2, "krp_slab_product_mode3");
  if (u.rows() != op1.n() || u.rows() != u_prime.rows() || u.cols() != u_prime.cols()) {
    throw std::invalid_argument("krp_slab_product_mode3: U and U' must both be N x F");
  }
  const std::size_t rank = u.cols();
  DenseMatrix out(rank, 2);
  const CenteredGramOperator* ops[2] = {&op1, &op2};
  for (std::size_t k = 0; k < 2; ++k) {
    // U(:,f)^T X U'(:,f) = <Z U(:,f), Z U'(:,f)> with Z = Y^T J.
    const DenseMatrix z_u = centered_coordinates(*ops[k], u);
    const DenseMatrix z_up = centered_coordinates(*ops[k], u_prime);
    for (std::size_t m = 0; m < z_u.rows(); ++m) {
      const auto a = z_u.row(m);
      const auto b = z_up.row(m);
      for (std::size_t f = 0; f < rank; ++f) out(f, k) += a[f] * b[f];
    }
  }
  return out;
}

AlsResult als_iterate(const CenteredGramOperator& op1, const CenteredGramOperator& op2,
                      const DenseMatrix& u0, const SolverConfig& cfg,
                      const AlsObserver& observer) {
  require_compatible(op1, op2, "als_iterate");
  cfg.validate();
  if (u0.rows() != op1.n() || u0.cols() == 0) {
    throw std::invalid_argument("als_iterate: U0 must be N x F");
  }
  if (!u0.all_finite()) throw NumericalError("als_iterate: non-finite U0");

  AlsResult result;
  CpdFactors& m = result.factors;
  AlsReport& report = result.report;
  auto notify = [&](AlsStage stage) {
    if (observer) observer(stage, m);
  };

  m.u = u0;
  normalize_columns(m.u);
  m.u_prime = m.u;
  m.c = solve_factor(hadamard(dense_gram(m.u_prime), dense_gram(m.u)),
                     krp_slab_product_mode3(op1, op2, m.u, m.u_prime), report.regularized);
  check_finite(m.c, "C", 0);
  notify(AlsStage::InitialC);

  for (std::size_t sweep = 1; sweep <= cfg.max_iter; ++sweep) {
    const DenseMatrix u_old = m.u;
    const DenseMatrix up_old = m.u_prime;
    const DenseMatrix c_old = m.c;

    // Rescaling each new factor to unit columns and pushing the norms into C
    // leaves the model unchanged.
    m.u = solve_factor(hadamard(dense_gram(m.c), dense_gram(m.u_prime)),
                       krp_slab_product_mode12(op1, op2, m.u_prime, m.c), report.regularized);
    check_finite(m.u, "U", sweep);
    scale_rows_of_c(m.c, normalize_columns(m.u));
    notify(AlsStage::U);

    m.u_prime = solve_factor(hadamard(dense_gram(m.c), dense_gram(m.u)),
                             krp_slab_product_mode12(op1, op2, m.u, m.c), report.regularized);
    check_finite(m.u_prime, "U'", sweep);
    scale_rows_of_c(m.c, normalize_columns(m.u_prime));
    notify(AlsStage::UPrime);

    m.c = solve_factor(hadamard(dense_gram(m.u_prime), dense_gram(m.u)),
                       krp_slab_product_mode3(op1, op2, m.u, m.u_prime), report.regularized);
    check_finite(m.c, "C", sweep);
    notify(AlsStage::C);

    report.sweeps = sweep;
    report.final_change = std::max({relative_difference(m.u, u_old),
                                    relative_difference(m.u_prime, up_old),
                                    relative_difference(m.c, c_old)});
    if (report.final_change < cfg.tol) {
      report.converged = true;
      break;
    }
  }

  // Sign conventions: <U_f, U'_f> >= 0, then the largest-magnitude entry of U_f positive.
  const std::size_t rank = m.rank();
  for (std::size_t f = 0; f < rank; ++f) {
    double inner = 0.0;
    std::size_t arg = 0;
    double best = -1.0;
    for (std::size_t i = 0; i < m.u.rows(); ++i) {
      inner += m.u(i, f) * m.u_prime(i, f);
      if (std::abs(m.u(i, f)) > best * (1.0 + 1e-12)) {
        best = std::abs(m.u(i, f));
        arg = i;
      }
    }
    if (inner < 0.0) {
      for (std::size_t i = 0; i < m.u_prime.rows(); ++i) m.u_prime(i, f) = -m.u_prime(i, f);
      m.c(0, f) = -m.c(0, f);
      m.c(1, f) = -m.c(1, f);
    }
    if (m.u(arg, f) < 0.0) {
      for (std::size_t i = 0; i < m.u.rows(); ++i) {
        m.u(i, f) = -m.u(i, f);
        m.u_prime(i, f) = -m.u_prime(i, f);
      }
    }
  }
  return result;
}

EmbeddingMatrix assemble_embeddings(const CpdFactors& factors, double lambda) {
  if (!(lambda >= 0.0 && lambda <= 1.0)) {
    throw std::invalid_argument("assemble_embeddings: lambda must lie in [0, 1]");
  }
  const std::size_t rank = factors.rank();
  if (factors.c.rows() != 2 || factors.c.cols() != rank) {
    throw std::invalid_argument("assemble_embeddings: C must be 2 x F");
  }
  EmbeddingMatrix out;
  out.lambda = lambda;
  std::vector<double> roots(rank);
  for (std::size_t f = 0; f < rank; ++f) {
    const double w = lambda * factors.c(0, f) + (1.0 - lambda) * factors.c(1, f);
    if (w < 0.0) out.clamped_dims.push_back(f);
    roots[f] = std::sqrt(std::max(0.0, w));
  }
  out.e = scale_columns(factors.u, roots);
  return out;
}

ReconstructionError reconstruction_error(const CenteredGramOperator& op1,
                                         const CenteredGramOperator& op2,
                                         const CpdFactors& factors, std::uint64_t seed) {
  require_compatible(op1, op2, "reconstruction_error");
  if (factors.u.rows() != op1.n() || factors.u_prime.rows() != op1.n()) {
    throw std::invalid_argument("reconstruction_error: factors must have N rows");
  }
  const SlabError e1 = slab_error(op1, factors, 0, seed);
  const SlabError e2 = slab_error(op2, factors, 1, seed);
  return {relative_error(e1), relative_error(e2), e1.estimated || e2.estimated};
}

EmbedResult embed(const SparseMatrix& adjacency, const SparseMatrix& attributes,
                  const SolverConfig& cfg) {
  cfg.validate();
  if (adjacency.n_rows() == 0) throw std::invalid_argument("embed: empty graph");
  if (adjacency.n_rows() != attributes.n_rows()) {
    throw std::invalid_argument("embed: adjacency and attributes disagree on node count");
  }
  const CenteredGramOperator op1(adjacency);
  const CenteredGramOperator op2(attributes);

  EmbedResult out;
  auto start = std::chrono::steady_clock::now();
  out.init = gage_evd_init(op1, op2, cfg.rank, cfg);
  out.init_seconds = seconds_since(start);

  start = std::chrono::steady_clock::now();
  AlsResult als = als_iterate(op1, op2, out.init.u0, cfg);
  out.als_seconds = seconds_since(start);
  out.factors = std::move(als.factors);
  out.als = als.report;
  out.embedding = assemble_embeddings(out.factors, cfg.lambda);
  return out;
}

}  // namespace gage
