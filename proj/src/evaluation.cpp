#include "gage/evaluation.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <string>
#include <unordered_set>

#include "gage/errors.hpp"
#include "gage/rng.hpp"

namespace gage {

namespace {

void require_nonempty(std::span<const double> pos, std::span<const double> neg, const char* who) {
  if (pos.empty() || neg.empty()) {
    throw std::invalid_argument(std::string(who) + ": both score sets must be nonempty");
  }
}

double softplus(double t) {
  // log(1 + exp(t)) without overflow
  return t > 0.0 ? t + std::log1p(std::exp(-t)) : std::log1p(std::exp(t));
}

double sigmoid(double t) {
  if (t >= 0.0) return 1.0 / (1.0 + std::exp(-t));
  const double e = std::exp(t);
  return e / (1.0 + e);
}

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

std::uint64_t pair_key(std::size_t i, std::size_t j, std::size_t n) {
  return static_cast<std::uint64_t>(i) * n + j;
}

// Columnwise mean/deviation over the given rows; a constant column keeps scale 1.
void standardize(DenseMatrix& e, std::span<const std::size_t> train_rows) {
  const std::size_t d = e.cols();
  std::vector<double> mean(d, 0.0), var(d, 0.0);
  for (std::size_t r : train_rows)
    for (std::size_t j = 0; j < d; ++j) mean[j] += e(r, j);
  for (double& m : mean) m /= static_cast<double>(train_rows.size());
  for (std::size_t r : train_rows)
    for (std::size_t j = 0; j < d; ++j) var[j] += (e(r, j) - mean[j]) * (e(r, j) - mean[j]);
  for (std::size_t j = 0; j < d; ++j) {
    const double sd = std::sqrt(var[j] / static_cast<double>(train_rows.size()));
    const double inv = sd > 0.0 ? 1.0 / sd : 1.0;
    for (std::size_t i = 0; i < e.rows(); ++i) e(i, j) = (e(i, j) - mean[j]) * inv;
  }
}

DenseMatrix gather_rows(const DenseMatrix& e, std::span<const std::size_t> rows) {
  DenseMatrix out(rows.size(), e.cols());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const auto src = e.row(rows[r]);
    std::copy(src.begin(), src.end(), out.row(r).begin());
  }
  return out;
}

double parse_double(std::string_view s) {
  while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
  while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) {
    throw std::invalid_argument("not a number: '" + std::string(s) + "'");
  }
  return v;
}

}  // namespace

LabeledSplit make_labeled_split(std::span<const int> labels, double train_ratio,
                                std::uint64_t seed) {
  if (!(train_ratio > 0.0 && train_ratio < 1.0)) {
    throw std::invalid_argument("make_labeled_split: ratio must lie in (0, 1)");
  }
  int max_label = -1;
  for (int l : labels) {
    if (l < kUnlabeled) throw std::invalid_argument("make_labeled_split: invalid label");
    max_label = std::max(max_label, l);
  }
  std::vector<std::vector<std::size_t>> by_class(static_cast<std::size_t>(max_label + 1));
  for (std::size_t i = 0; i < labels.size(); ++i)
    if (labels[i] != kUnlabeled) by_class[static_cast<std::size_t>(labels[i])].push_back(i);

  LabeledSplit split;
  split.shuffle_seed = seed;
  Rng rng(seed);
  for (auto& members : by_class) {
    const std::size_t n_c = members.size();
    if (n_c == 0) continue;
    rng.shuffle(members.begin(), members.end());
    std::size_t n_train;
    if (n_c == 1) {
      n_train = train_ratio >= 0.5 ? 1 : 0;
    } else {
      const auto wanted = static_cast<std::size_t>(std::llround(train_ratio * double(n_c)));
      n_train = std::clamp<std::size_t>(wanted, 1, n_c - 1);
    }
    split.train_idx.insert(split.train_idx.end(), members.begin(), members.begin() + n_train);
    split.test_idx.insert(split.test_idx.end(), members.begin() + n_train, members.end());
  }
  std::sort(split.train_idx.begin(), split.train_idx.end());
  std::sort(split.test_idx.begin(), split.test_idx.end());
  return split;
}

LinkSplit make_link_split(const SparseMatrix& adj, double removal_ratio, std::uint64_t seed) {
  const std::size_t n = adj.n_rows();
  if (adj.n_cols() != n) throw std::invalid_argument("make_link_split: adjacency must be square");
  if (!(removal_ratio > 0.0 && removal_ratio < 1.0)) {
    throw std::invalid_argument("make_link_split: ratio must lie in (0, 1)");
  }
  const bool symmetric = adj.is_symmetric();

  std::vector<NodePair> edges;
  const auto row_ptr = adj.row_ptr();
  const auto col_idx = adj.col_idx();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t p = row_ptr[i]; p < row_ptr[i + 1]; ++p) {
      const std::size_t j = col_idx[p];
      if (symmetric ? i < j : i != j) edges.push_back({i, j});
    }
  const auto n_remove =
      static_cast<std::size_t>(std::floor(removal_ratio * static_cast<double>(edges.size())));
  if (n_remove == 0) throw DataError("make_link_split: no edge would be removed");

  LinkSplit split;
  split.seed = seed;
  Rng rng(seed);
  rng.shuffle(edges.begin(), edges.end());
  split.test_pos.assign(edges.begin(), edges.begin() + n_remove);

  std::unordered_set<std::uint64_t> removed;
  for (const NodePair& e : split.test_pos) {
    removed.insert(pair_key(e.i, e.j, n));
    if (symmetric) removed.insert(pair_key(e.j, e.i, n));
  }
  std::vector<Triplet> kept;
  kept.reserve(adj.nnz());
  for (const Triplet& t : adj.triplets())
    if (!removed.contains(pair_key(t.row, t.col, n))) kept.push_back(t);
  split.train_adjacency = SparseMatrix::from_triplets(n, n, std::move(kept));

  std::unordered_set<std::uint64_t> chosen;
  const std::size_t max_attempts = 100 * n_remove;
  std::size_t attempts = 0;
  while (split.test_neg.size() < n_remove) {
    if (attempts++ >= max_attempts) {
      throw DataError("make_link_split: graph too dense to sample " + std::to_string(n_remove) +
                      " non-edges");
    }
    std::size_t i = rng.index(n);
    std::size_t j = rng.index(n);
    if (i == j || adj.at(i, j) != 0.0) continue;
    if (symmetric && i > j) std::swap(i, j);
    if (!chosen.insert(pair_key(i, j, n)).second) continue;
    split.test_neg.push_back({i, j});
  }
  return split;
}

std::vector<double> score_pairs(const DenseMatrix& e, std::span<const NodePair> pairs) {
  std::vector<double> scores;
  scores.reserve(pairs.size());
  for (const NodePair& p : pairs) {
    if (p.i >= e.rows() || p.j >= e.rows()) {
      throw std::invalid_argument("score_pairs: node index out of range");
    }
    scores.push_back(dot(e.row(p.i), e.row(p.j)));
  }
  return scores;
}

double auc(std::span<const double> scores_pos, std::span<const double> scores_neg) {
  require_nonempty(scores_pos, scores_neg, "auc");
  // Midrank form of the Mann-Whitney statistic.
  struct Item {
    double score;
    bool positive;
  };
  std::vector<Item> items;
  items.reserve(scores_pos.size() + scores_neg.size());
  for (double s : scores_pos) items.push_back({s, true});
  for (double s : scores_neg) items.push_back({s, false});
  std::sort(items.begin(), items.end(),
            [](const Item& a, const Item& b) { return a.score < b.score; });
  double rank_sum = 0.0;
  for (std::size_t lo = 0; lo < items.size();) {
    std::size_t hi = lo;
    while (hi < items.size() && items[hi].score == items[lo].score) ++hi;
    const double midrank = 0.5 * static_cast<double>(lo + 1 + hi);
    for (std::size_t k = lo; k < hi; ++k)
      if (items[k].positive) rank_sum += midrank;
    lo = hi;
  }
  const double p = static_cast<double>(scores_pos.size());
  const double q = static_cast<double>(scores_neg.size());
  return (rank_sum - p * (p + 1.0) / 2.0) / (p * q);
}

double average_precision(std::span<const double> scores_pos,
                         std::span<const double> scores_neg) {
  require_nonempty(scores_pos, scores_neg, "average_precision");
  std::vector<std::pair<double, bool>> items;
  items.reserve(scores_pos.size() + scores_neg.size());
  for (double s : scores_pos) items.emplace_back(s, true);
  for (double s : scores_neg) items.emplace_back(s, false);
  std::stable_sort(items.begin(), items.end(),
                   [](const auto& a, const auto& b) { return a.first > b.first; });
  const double total_pos = static_cast<double>(scores_pos.size());
  double tp = 0.0, fp = 0.0, ap = 0.0, prev_tp = 0.0;
  for (std::size_t lo = 0; lo < items.size();) {
    std::size_t hi = lo;
    for (; hi < items.size() && items[hi].first == items[lo].first; ++hi)
      (items[hi].second ? tp : fp) += 1.0;
    ap += (tp / (tp + fp)) * (tp - prev_tp) / total_pos;
    prev_tp = tp;
    lo = hi;
  }
  return ap;
}

LinkScores evaluate_link_split(const DenseMatrix& e, const LinkSplit& split) {
  const std::vector<double> pos = score_pairs(e, split.test_pos);
  const std::vector<double> neg = score_pairs(e, split.test_neg);
  return {auc(pos, neg), average_precision(pos, neg)};
}

void LogRegConfig::validate() const {
  if (!(reg_strength >= 0.0) || !std::isfinite(reg_strength)) {
    throw std::invalid_argument("LogRegConfig: reg_strength must be finite and >= 0");
  }
  if (max_iter < 1) throw std::invalid_argument("LogRegConfig: max_iter must be >= 1");
  if (!(grad_tol > 0.0)) throw std::invalid_argument("LogRegConfig: grad_tol must be > 0");
}

double logistic_objective(const DenseMatrix& x, std::span<const double> y,
                          std::span<const double> wb, double reg_strength,
                          std::vector<double>* grad) {
  const std::size_t n = x.rows();
  const std::size_t d = x.cols();
  if (y.size() != n || wb.size() != d + 1) {
    throw std::invalid_argument("logistic_objective: dimension mismatch");
  }
  const auto w = wb.first(d);
  const double b = wb[d];
  if (grad) grad->assign(d + 1, 0.0);
  double loss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const auto xi = x.row(i);
    const double margin = y[i] * (dot(w, xi) + b);
    loss += softplus(-margin);
    if (grad) {
      const double coef = -y[i] * sigmoid(-margin);
      for (std::size_t j = 0; j < d; ++j) (*grad)[j] += coef * xi[j];
      (*grad)[d] += coef;
    }
  }
  const double inv_n = 1.0 / static_cast<double>(n);
  loss = (loss + 0.5 * reg_strength * dot(w, w)) * inv_n;
  if (grad) {
    for (std::size_t j = 0; j < d; ++j) (*grad)[j] = ((*grad)[j] + reg_strength * w[j]) * inv_n;
    (*grad)[d] *= inv_n;
  }
  return loss;
}

BinaryLogReg fit_binary_logreg(const DenseMatrix& x, std::span<const double> y,
                               const LogRegConfig& cfg) {
  cfg.validate();
  if (x.rows() == 0) throw std::invalid_argument("fit_binary_logreg: no samples");
  const std::size_t p = x.cols() + 1;
  constexpr double kArmijo = 1e-4;
  constexpr int kMaxHalvings = 60;

  BinaryLogReg fit;
  fit.wb.assign(p, 0.0);
  std::vector<double> grad, trial(p), trial_grad;
  double loss = logistic_objective(x, y, fit.wb, cfg.reg_strength, &grad);
  fit.loss_history.push_back(loss);
  double step = 1.0;

  while (fit.iterations < cfg.max_iter) {
    const double gnorm2 = dot(grad, grad);
    if (std::sqrt(gnorm2) < cfg.grad_tol) {
      fit.converged = true;
      break;
    }
    double t = step;
    double trial_loss = 0.0;
    bool accepted = false;
    for (int h = 0; h < kMaxHalvings; ++h, t *= 0.5) {
      for (std::size_t k = 0; k < p; ++k) trial[k] = fit.wb[k] - t * grad[k];
      trial_loss = logistic_objective(x, y, trial, cfg.reg_strength, &trial_grad);
      if (trial_loss <= loss - kArmijo * t * gnorm2) {
        accepted = true;
        break;
      }
    }
    if (!accepted) break;  // no descent left at double precision

    // Barzilai-Borwein: s^T s / s^T (g_new - g_old).
    double ss = 0.0, sy = 0.0;
    for (std::size_t k = 0; k < p; ++k) {
      const double s = trial[k] - fit.wb[k];
      ss += s * s;
      sy += s * (trial_grad[k] - grad[k]);
    }
    step = sy > 0.0 ? ss / sy : t;

    fit.wb.swap(trial);
    grad.swap(trial_grad);
    loss = trial_loss;
    fit.loss_history.push_back(loss);
    ++fit.iterations;
  }
  if (!fit.converged && std::sqrt(dot(grad, grad)) < cfg.grad_tol) fit.converged = true;
  return fit;
}

ClassifierWeights train_logreg_ovr(const DenseMatrix& x, std::span<const int> labels,
                                   const LogRegConfig& cfg) {
  if (labels.size() != x.rows()) {
    throw std::invalid_argument("train_logreg_ovr: one label per row required");
  }
  int max_label = -1;
  for (int l : labels) {
    if (l < 0) throw std::invalid_argument("train_logreg_ovr: labels must be >= 0");
    max_label = std::max(max_label, l);
  }
  const auto k = static_cast<std::size_t>(max_label + 1);
  std::vector<std::size_t> counts(k, 0);
  for (int l : labels) ++counts[static_cast<std::size_t>(l)];
  if (std::count_if(counts.begin(), counts.end(), [](std::size_t c) { return c > 0; }) < 2) {
    throw std::invalid_argument("train_logreg_ovr: at least two classes are required");
  }

  ClassifierWeights model;
  model.w = DenseMatrix(k, x.cols());
  model.bias.assign(k, -std::numeric_limits<double>::infinity());
  std::vector<double> y(labels.size());
  for (std::size_t c = 0; c < k; ++c) {
    if (counts[c] == 0) continue;
    for (std::size_t i = 0; i < labels.size(); ++i)
      y[i] = static_cast<std::size_t>(labels[i]) == c ? 1.0 : -1.0;
    const BinaryLogReg fit = fit_binary_logreg(x, y, cfg);
    std::copy(fit.wb.begin(), fit.wb.end() - 1, model.w.row(c).begin());
    model.bias[c] = fit.wb.back();
    model.max_iterations = std::max(model.max_iterations, fit.iterations);
    model.converged = model.converged && fit.converged;
  }
  return model;
}

std::vector<int> predict(const ClassifierWeights& model, const DenseMatrix& x) {
  if (x.cols() != model.w.cols()) throw std::invalid_argument("predict: feature dimension mismatch");
  std::vector<int> out(x.rows());
  for (std::size_t i = 0; i < x.rows(); ++i) {
    double best = -std::numeric_limits<double>::infinity();
    int arg = 0;
    for (std::size_t c = 0; c < model.w.rows(); ++c) {
      const double z = dot(model.w.row(c), x.row(i)) + model.bias[c];
      if (z > best) {
        best = z;
        arg = static_cast<int>(c);
      }
    }
    out[i] = arg;
  }
  return out;
}

F1Scores f1_scores(std::span<const int> pred, std::span<const int> truth, std::size_t n_classes) {
  if (pred.size() != truth.size()) throw std::invalid_argument("f1_scores: length mismatch");
  if (pred.empty()) throw std::invalid_argument("f1_scores: empty input");
  int max_label = -1;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    if (pred[i] < 0 || truth[i] < 0) throw std::invalid_argument("f1_scores: negative label");
    max_label = std::max({max_label, pred[i], truth[i]});
  }
  if (n_classes == 0) n_classes = static_cast<std::size_t>(max_label + 1);
  if (static_cast<std::size_t>(max_label) >= n_classes) {
    throw std::invalid_argument("f1_scores: label exceeds n_classes");
  }
  std::vector<double> tp(n_classes, 0.0), fp(n_classes, 0.0), fn(n_classes, 0.0);
  for (std::size_t i = 0; i < pred.size(); ++i) {
    const auto p = static_cast<std::size_t>(pred[i]);
    const auto t = static_cast<std::size_t>(truth[i]);
    if (p == t) {
      tp[p] += 1.0;
    } else {
      fp[p] += 1.0;
      fn[t] += 1.0;
    }
  }
  const double sum_tp = std::accumulate(tp.begin(), tp.end(), 0.0);
  const double sum_fp = std::accumulate(fp.begin(), fp.end(), 0.0);
  const double sum_fn = std::accumulate(fn.begin(), fn.end(), 0.0);
  F1Scores s;
  s.micro = 2.0 * sum_tp / (2.0 * sum_tp + sum_fp + sum_fn);
  for (std::size_t c = 0; c < n_classes; ++c) {
    const double denom = 2.0 * tp[c] + fp[c] + fn[c];
    s.macro += denom > 0.0 ? 2.0 * tp[c] / denom : 0.0;
  }
  s.macro /= static_cast<double>(n_classes);
  return s;
}

std::pair<double, double> mean_std(std::span<const double> values) {
  if (values.empty()) return {0.0, 0.0};
  const double n = static_cast<double>(values.size());
  const double mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  return {mean, std::sqrt(ss / n)};
}

NodeClassificationReport run_node_classification(const DenseMatrix& e,
                                                 std::span<const int> labels,
                                                 const NodeClassificationConfig& cfg) {
  if (labels.size() != e.rows()) {
    throw std::invalid_argument("run_node_classification: one label per embedding row required");
  }
  if (cfg.n_shuffles < 1 || cfg.train_ratios.empty()) {
    throw std::invalid_argument("run_node_classification: need at least one split and shuffle");
  }
  const int max_label = labels.empty() ? -1 : *std::max_element(labels.begin(), labels.end());
  const auto n_classes = static_cast<std::size_t>(max_label + 1);

  NodeClassificationReport report;
  report.standardized = cfg.standardize;
  for (std::size_t s = 0; s < cfg.train_ratios.size(); ++s) {
    const double ratio = cfg.train_ratios[s];
    std::vector<double> micro, macro;
    ClassificationSummary summary;
    summary.train_ratio = ratio;
    for (std::size_t r = 0; r < cfg.n_shuffles; ++r) {
      const std::uint64_t seed = Rng::derive(Rng::derive(cfg.seed, s), r);
      const LabeledSplit split = make_labeled_split(labels, ratio, seed);
      if (split.test_idx.empty()) throw DataError("run_node_classification: empty test set");

      DenseMatrix features = e;
      if (cfg.standardize) standardize(features, split.train_idx);
      std::vector<int> y_train, y_test;
      for (std::size_t i : split.train_idx) y_train.push_back(labels[i]);
      for (std::size_t i : split.test_idx) y_test.push_back(labels[i]);

      const ClassifierWeights model =
          train_logreg_ovr(gather_rows(features, split.train_idx), y_train, cfg.logreg);
      const std::vector<int> pred = predict(model, gather_rows(features, split.test_idx));
      const F1Scores f1 = f1_scores(pred, y_test, n_classes);

      report.runs.push_back({ratio, r, seed, split.train_idx.size(), split.test_idx.size(),
                             f1.micro, f1.macro});
      micro.push_back(f1.micro);
      macro.push_back(f1.macro);
      summary.n_train = split.train_idx.size();
      summary.n_test = split.test_idx.size();
    }
    std::tie(summary.micro_mean, summary.micro_std) = mean_std(micro);
    std::tie(summary.macro_mean, summary.macro_std) = mean_std(macro);
    report.summary.push_back(summary);
  }
  return report;
}

LinkPredictionReport run_link_prediction(const SparseMatrix& adjacency,
                                         const SparseMatrix& attributes,
                                         const LinkPredictionConfig& cfg) {
  if (cfg.n_shuffles < 1) throw std::invalid_argument("run_link_prediction: need a shuffle");
  LinkPredictionReport report;
  std::vector<double> aucs, aps;
  for (std::size_t r = 0; r < cfg.n_shuffles; ++r) {
    const std::uint64_t seed = Rng::derive(cfg.seed, r);
    const LinkSplit split = make_link_split(adjacency, cfg.removal_ratio, seed);
    const EmbedResult fit = embed(split.train_adjacency, attributes, cfg.solver);
    const LinkScores scores = evaluate_link_split(fit.embedding.e, split);
    report.runs.push_back({r, seed, split.test_pos.size() + split.test_neg.size(), scores.auc,
                           scores.average_precision, fit.als.sweeps});
    aucs.push_back(scores.auc);
    aps.push_back(scores.average_precision);
  }
  std::tie(report.auc_mean, report.auc_std) = mean_std(aucs);
  std::tie(report.ap_mean, report.ap_std) = mean_std(aps);
  return report;
}

std::vector<double> parse_lambda_grid(std::string_view text) {
  std::vector<double> grid;
  if (text.find(':') != std::string_view::npos) {
    std::vector<double> parts;
    std::size_t start = 0;
    while (true) {
      const std::size_t colon = text.find(':', start);
      parts.push_back(parse_double(text.substr(start, colon - start)));
      if (colon == std::string_view::npos) break;
      start = colon + 1;
    }
    if (parts.size() != 3) throw std::invalid_argument("lambda grid must be start:stop:step");
    const double first = parts[0], last = parts[1], step = std::abs(parts[2]);
    if (!(step > 0.0)) throw std::invalid_argument("lambda grid step must be positive");
    const double dir = last >= first ? 1.0 : -1.0;
    // Points are first + k*step; the endpoint is included up to rounding.
    const auto count = static_cast<std::size_t>(std::floor(std::abs(last - first) / step + 1e-9));
    for (std::size_t k = 0; k <= count; ++k) grid.push_back(first + dir * double(k) * step);
    if (std::abs(grid.back() - last) < 1e-9 * step) grid.back() = last;
  } else {
    std::size_t start = 0;
    while (start <= text.size()) {
      const std::size_t comma = text.find(',', start);
      grid.push_back(parse_double(text.substr(start, comma - start)));
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
  }
  for (double l : grid) {
    if (!(l >= 0.0 && l <= 1.0)) throw std::invalid_argument("lambda values must lie in [0, 1]");
  }
  return grid;
}

std::vector<LambdaPoint> lambda_sweep(const CpdFactors& factors, std::span<const double> grid,
                                      const EmbeddingTask& task) {
  if (grid.empty()) throw std::invalid_argument("lambda_sweep: empty grid");
  if (!task) throw std::invalid_argument("lambda_sweep: no task");
  std::vector<LambdaPoint> curve;
  for (double lambda : grid) {
    const EmbeddingMatrix e = assemble_embeddings(factors, lambda);
    curve.push_back({lambda, task(e), e.clamped_dims.size()});
  }
  return curve;
}

void write_classification_runs_tsv(std::ostream& out, const NodeClassificationReport& report) {
  out << "train_ratio\tshuffle\tseed\tn_train\tn_test\tmicro_f1\tmacro_f1\n";
  for (const ClassificationRun& r : report.runs) {
    out << r.train_ratio << '\t' << r.shuffle << '\t' << r.seed << '\t' << r.n_train << '\t'
        << r.n_test << '\t' << r.micro << '\t' << r.macro << '\n';
  }
}

void write_classification_summary_tsv(std::ostream& out, const NodeClassificationReport& report) {
  out << "train_ratio\tmicro_mean\tmicro_std\tmacro_mean\tmacro_std\tn_train\tn_test\n";
  for (const ClassificationSummary& s : report.summary) {
    out << s.train_ratio << '\t' << s.micro_mean << '\t' << s.micro_std << '\t' << s.macro_mean
        << '\t' << s.macro_std << '\t' << s.n_train << '\t' << s.n_test << '\n';
  }
}

void write_link_prediction_tsv(std::ostream& out, const LinkPredictionReport& report) {
  out << "shuffle\tseed\tn_test\tauc\taverage_precision\tals_sweeps\n";
  for (const LinkPredictionRun& r : report.runs) {
    out << r.shuffle << '\t' << r.seed << '\t' << r.n_test << '\t' << r.auc << '\t'
        << r.average_precision << '\t' << r.als_sweeps << '\n';
  }
  out << "mean\t\t\t" << report.auc_mean << '\t' << report.ap_mean << "\t\n";
  out << "std\t\t\t" << report.auc_std << '\t' << report.ap_std << "\t\n";
}

void write_lambda_curve_tsv(std::ostream& out, std::span<const LambdaPoint> curve,
                            std::string_view metric_name) {
  out << "lambda\t" << metric_name << "\tclamped_dims\n";
  for (const LambdaPoint& p : curve) {
    out << p.lambda << '\t' << p.metric << '\t' << p.clamped_dims << '\n';
  }
}

}  // namespace gage
