#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <string_view>
#include <vector>

#include "gage/dense_matrix.hpp"
#include "gage/solver.hpp"
#include "gage/sparse_matrix.hpp"

namespace gage {

/// Label value for nodes without a class.
inline constexpr int kUnlabeled = -1;

struct LabeledSplit {
  std::vector<std::size_t> train_idx;
  std::vector<std::size_t> test_idx;
  std::uint64_t shuffle_seed = 0;
};

/// Stratified split of the labeled nodes. A class with n_c >= 2 members keeps
/// clamp(round(ratio * n_c), 1, n_c - 1) of them in train.
LabeledSplit make_labeled_split(std::span<const int> labels, double train_ratio,
                                std::uint64_t seed);

struct NodePair {
  std::size_t i = 0;
  std::size_t j = 0;
  bool operator==(const NodePair&) const = default;
};

struct LinkSplit {
  SparseMatrix train_adjacency;
  std::vector<NodePair> test_pos;
  std::vector<NodePair> test_neg;
  std::uint64_t seed = 0;
};

/// Removes floor(ratio * |E|) edges (both directions when adj is symmetric) and
/// samples as many non-edges of the original graph, self-loops excluded.
LinkSplit make_link_split(const SparseMatrix& adj, double removal_ratio, std::uint64_t seed);

/// e_i^T e_j for every pair.
std::vector<double> score_pairs(const DenseMatrix& e, std::span<const NodePair> pairs);

/// Mann-Whitney AUC, ties count one half.
double auc(std::span<const double> scores_pos, std::span<const double> scores_neg);

/// Precision-recall summation over the descending ranking; tied scores form
/// one threshold, so precision is read at the end of each tie group.
double average_precision(std::span<const double> scores_pos, std::span<const double> scores_neg);

struct LinkScores {
  double auc = 0.0;
  double average_precision = 0.0;
};

LinkScores evaluate_link_split(const DenseMatrix& e, const LinkSplit& split);

struct LogRegConfig {
  /// Inverse of the usual C: loss is mean log-loss + reg / (2n) ||w||^2.
  double reg_strength = 1.0;
  std::size_t max_iter = 500;
  double grad_tol = 1e-6;

  void validate() const;
};

/// Mean binary log-loss plus ridge on w (the bias, last entry of wb, is not
/// penalized). y holds +-1. Writes the gradient when grad is non-null.
double logistic_objective(const DenseMatrix& x, std::span<const double> y,
                          std::span<const double> wb, double reg_strength,
                          std::vector<double>* grad = nullptr);

struct BinaryLogReg {
  std::vector<double> wb;  // d weights then the bias
  std::size_t iterations = 0;
  bool converged = false;
  std::vector<double> loss_history;  // objective after each accepted step, starting at wb = 0
};

/// Full-batch gradient descent from zero with Barzilai-Borwein trial steps and
/// Armijo backtracking.
BinaryLogReg fit_binary_logreg(const DenseMatrix& x, std::span<const double> y,
                               const LogRegConfig& cfg);

struct ClassifierWeights {
  DenseMatrix w;              // K x d
  std::vector<double> bias;   // K; -inf for classes absent from training
  std::size_t max_iterations = 0;
  bool converged = true;
};

/// One-vs-rest logistic regression; labels in [0, K). Needs two or more classes.
ClassifierWeights train_logreg_ovr(const DenseMatrix& x, std::span<const int> labels,
                                   const LogRegConfig& cfg);

std::vector<int> predict(const ClassifierWeights& model, const DenseMatrix& x);

struct F1Scores {
  double micro = 0.0;
  double macro = 0.0;
};

/// Macro averages over classes [0, n_classes); a class with no support in either
/// vector counts as F1 = 0. n_classes = 0 means max label + 1.
F1Scores f1_scores(std::span<const int> pred, std::span<const int> truth,
                   std::size_t n_classes = 0);

struct NodeClassificationConfig {
  std::vector<double> train_ratios{0.9, 0.5, 0.1};
  std::size_t n_shuffles = 10;
  std::uint64_t seed = 0;
  LogRegConfig logreg;
  /// Standardize every dimension with train-row mean and deviation.
  bool standardize = true;
};

struct ClassificationRun {
  double train_ratio = 0.0;
  std::size_t shuffle = 0;
  std::uint64_t seed = 0;
  std::size_t n_train = 0;
  std::size_t n_test = 0;
  double micro = 0.0;
  double macro = 0.0;
};

/// Per split ratio: mean and population deviation of micro/macro F1, plus the
/// train/test sizes of the split.
struct ClassificationSummary {
  double train_ratio = 0.0;
  double micro_mean = 0.0;
  double micro_std = 0.0;
  double macro_mean = 0.0;
  double macro_std = 0.0;
  std::size_t n_train = 0;
  std::size_t n_test = 0;
};

struct NodeClassificationReport {
  std::vector<ClassificationRun> runs;
  std::vector<ClassificationSummary> summary;
  bool standardized = true;
};

NodeClassificationReport run_node_classification(const DenseMatrix& e,
                                                 std::span<const int> labels,
                                                 const NodeClassificationConfig& cfg);

struct LinkPredictionConfig {
  double removal_ratio = 0.5;
  std::size_t n_shuffles = 5;
  std::uint64_t seed = 0;
  SolverConfig solver;
};

struct LinkPredictionRun {
  std::size_t shuffle = 0;
  std::uint64_t seed = 0;
  std::size_t n_test = 0;
  double auc = 0.0;
  double average_precision = 0.0;
  std::size_t als_sweeps = 0;
};

struct LinkPredictionReport {
  std::vector<LinkPredictionRun> runs;
  double auc_mean = 0.0;
  double auc_std = 0.0;
  double ap_mean = 0.0;
  double ap_std = 0.0;
};

/// Embeds each edge-removed graph (attributes untouched) and ranks its test pairs.
LinkPredictionReport run_link_prediction(const SparseMatrix& adjacency,
                                         const SparseMatrix& attributes,
                                         const LinkPredictionConfig& cfg);

/// Parses "start:stop:step" (inclusive, either direction) or a comma list.
std::vector<double> parse_lambda_grid(std::string_view text);

struct LambdaPoint {
  double lambda = 0.0;
  double metric = 0.0;
  std::size_t clamped_dims = 0;
};

using EmbeddingTask = std::function<double(const EmbeddingMatrix&)>;

/// Reassembles embeddings from fixed factors at each lambda and scores them.
std::vector<LambdaPoint> lambda_sweep(const CpdFactors& factors, std::span<const double> grid,
                                      const EmbeddingTask& task);

/// Mean and population standard deviation.
std::pair<double, double> mean_std(std::span<const double> values);

void write_classification_runs_tsv(std::ostream& out, const NodeClassificationReport& report);
void write_classification_summary_tsv(std::ostream& out, const NodeClassificationReport& report);
void write_link_prediction_tsv(std::ostream& out, const LinkPredictionReport& report);
void write_lambda_curve_tsv(std::ostream& out, std::span<const LambdaPoint> curve,
                            std::string_view metric_name);

}  // namespace gage
