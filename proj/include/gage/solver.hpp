#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "gage/centered_gram.hpp"
#include "gage/dense_matrix.hpp"
#include "gage/spectral.hpp"

namespace gage {

/// Rank-F CPD of the N x N x 2 tensor with slabs X_1, X_2:
/// X_k ~= U diag(C(k,:)) U'^T.
struct CpdFactors {
  DenseMatrix u;        // N x F
  DenseMatrix u_prime;  // N x F
  DenseMatrix c;        // 2 x F

  std::size_t rank() const noexcept { return u.cols(); }
};

/// How the initial U is recovered from the dominant subspace V and the
/// eigenvectors W of S2 S1^{-1}.
enum class InitMethod {
  Evd,        // U = V W
  PaperBox,   // U^T = W^{-1} V^T
  PaperText,  // U^T = W^{-1} S1, lifted through V
  Random,     // seeded Gaussian, no spectral work
};

std::string_view to_string(InitMethod m) noexcept;
InitMethod parse_init_method(std::string_view name);

struct SolverConfig {
  std::size_t rank = 16;
  double tol = 1e-6;
  std::size_t max_iter = 50;
  std::uint64_t seed = 0;
  double lambda = 0.8;
  InitMethod init = InitMethod::Evd;
  double subspace_tol = 1e-8;
  std::size_t subspace_max_iter = 300;

  void validate() const;
};

struct InitResult {
  DenseMatrix u0;
  /// S1 could not be inverted even with a ridge; u0 fell back to V.
  bool degenerate = false;
  bool complex_pairs = false;
  bool regularized = false;
  std::size_t subspace_iterations = 0;
  bool subspace_converged = false;
};

/// Algebraic initializer: dominant subspace of X1^2 + X2^2, projected slabs,
/// and the eigenvectors of S2 S1^{-1}. Requires rank <= N - 1.
InitResult gage_evd_init(const CenteredGramOperator& op1, const CenteredGramOperator& op2,
                         std::size_t rank, const SolverConfig& cfg);

/// sum_k diag(C(k,:)) (X_k A)^T, i.e. (C (.) A)^T times the stacked slabs. F x N.
DenseMatrix krp_slab_product_mode12(const CenteredGramOperator& op1,
                                    const CenteredGramOperator& op2, const DenseMatrix& a,
                                    const DenseMatrix& c);

/// Entry (f, k) = U(:,f)^T X_k U'(:,f). F x 2.
DenseMatrix krp_slab_product_mode3(const CenteredGramOperator& op1,
                                   const CenteredGramOperator& op2, const DenseMatrix& u,
                                   const DenseMatrix& u_prime);

enum class AlsStage { InitialC, U, UPrime, C };

/// Called after every factor update with the current (unnormalized) model.
using AlsObserver = std::function<void(AlsStage, const CpdFactors&)>;

struct AlsReport {
  std::size_t sweeps = 0;
  double final_change = 0.0;
  bool converged = false;
  /// At least one normal-equation solve needed the ridge fallback.
  bool regularized = false;
};

struct AlsResult {
  CpdFactors factors;
  AlsReport report;
};

/// Alternating least squares from U0. Output columns of U and U' are unit
/// norm, scales live in C, and <U(:,f), U'(:,f)> >= 0.
AlsResult als_iterate(const CenteredGramOperator& op1, const CenteredGramOperator& op2,
                      const DenseMatrix& u0, const SolverConfig& cfg,
                      const AlsObserver& observer = {});

struct EmbeddingMatrix {
  DenseMatrix e;
  double lambda = 0.0;
  /// Columns whose combined weight lambda C(1,f) + (1-lambda) C(2,f) was negative.
  std::vector<std::size_t> clamped_dims;
};

EmbeddingMatrix assemble_embeddings(const CpdFactors& factors, double lambda);

struct ReconstructionError {
  double slab1 = 0.0;
  double slab2 = 0.0;
  /// ||X_k||_F came from a Hutchinson estimate for at least one slab.
  bool estimated = false;
};

/// Relative Frobenius error per slab. Norms are exact when the smaller Gram
/// dimension is <= 4096 and a 64-probe Hutchinson estimate otherwise.
ReconstructionError reconstruction_error(const CenteredGramOperator& op1,
                                         const CenteredGramOperator& op2,
                                         const CpdFactors& factors, std::uint64_t seed = 0);

struct EmbedResult {
  CpdFactors factors;
  EmbeddingMatrix embedding;
  InitResult init;
  AlsReport als;
  double init_seconds = 0.0;
  double als_seconds = 0.0;
};

/// Full pipeline: operators from Y1 (adjacency) and Y2 (attributes), init, ALS, assembly.
EmbedResult embed(const SparseMatrix& adjacency, const SparseMatrix& attributes,
                  const SolverConfig& cfg);

}  // namespace gage
