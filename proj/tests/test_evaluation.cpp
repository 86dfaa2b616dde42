#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <sstream>
#include <stdexcept>

#include "gage/errors.hpp"
#include "gage/evaluation.hpp"
#include "support/oracle.hpp"

using namespace gage;
using namespace gage::testing;

namespace {

double pairwise_auc(const std::vector<double>& pos, const std::vector<double>& neg) {
  double s = 0.0;
  for (double p : pos)
    for (double q : neg) s += p > q ? 1.0 : (p == q ? 0.5 : 0.0);
  return s / static_cast<double>(pos.size() * neg.size());
}

// Step-wise AP over distinct thresholds, O(n^2).
double threshold_ap(const std::vector<double>& pos, const std::vector<double>& neg) {
  std::set<double, std::greater<>> thresholds(pos.begin(), pos.end());
  thresholds.insert(neg.begin(), neg.end());
  double ap = 0.0, prev_recall = 0.0;
  for (double t : thresholds) {
    const auto tp = std::count_if(pos.begin(), pos.end(), [&](double s) { return s >= t; });
    const auto fp = std::count_if(neg.begin(), neg.end(), [&](double s) { return s >= t; });
    const double recall = static_cast<double>(tp) / static_cast<double>(pos.size());
    ap += (recall - prev_recall) * static_cast<double>(tp) / static_cast<double>(tp + fp);
    prev_recall = recall;
  }
  return ap;
}

std::vector<double> draw(std::size_t n, std::uint64_t seed, bool coarse) {
  const Eigen::MatrixXd g = gaussian(static_cast<Eigen::Index>(n), 1, seed);
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = coarse ? std::round(g(i, 0) * 2) : g(i, 0);
  return out;
}

// Independent log-loss: mean log(1 + exp(-y (x w + b))) + reg/(2n) |w|^2.
double oracle_loss(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, const Eigen::VectorXd& wb,
                   double reg) {
  const Eigen::Index d = x.cols();
  const Eigen::VectorXd margin =
      (y.array() * ((x * wb.head(d)).array() + wb(d))).matrix();
  double loss = 0.0;
  for (Eigen::Index i = 0; i < margin.size(); ++i) loss += std::log1p(std::exp(-margin(i)));
  const double n = static_cast<double>(x.rows());
  return loss / n + reg / (2 * n) * wb.head(d).squaredNorm();
}

struct Blobs {
  DenseMatrix x;
  std::vector<int> labels;
};

Blobs blobs(std::size_t per_class, std::uint64_t seed) {
  const double centers[3][2] = {{0, 0}, {6, 0}, {0, 6}};
  const Eigen::MatrixXd noise = gaussian(static_cast<Eigen::Index>(3 * per_class), 2, seed);
  Blobs b{DenseMatrix(3 * per_class, 2), {}};
  for (std::size_t i = 0; i < 3 * per_class; ++i) {
    const int c = static_cast<int>(i % 3);
    b.x(i, 0) = centers[c][0] + noise(i, 0);
    b.x(i, 1) = centers[c][1] + noise(i, 1);
    b.labels.push_back(c);
  }
  return b;
}

SparseMatrix ring_with_chords(std::size_t n, std::size_t chords) {
  std::vector<Triplet> t;
  auto add = [&](std::size_t i, std::size_t j) {
    t.push_back({i, j, 1.0});
    t.push_back({j, i, 1.0});
  };
  for (std::size_t i = 0; i < n; ++i) add(i, (i + 1) % n);
  for (std::size_t c = 0; c < chords; ++c) add(c, (c + n / 2) % n);
  return SparseMatrix::from_triplets(n, n, std::move(t));
}

}  // namespace

TEST(Auc, Examples) {
  EXPECT_DOUBLE_EQ(auc(std::vector<double>{5, 4}, std::vector<double>{1, 0}), 1.0);
  EXPECT_DOUBLE_EQ(auc(std::vector<double>{2, 2}, std::vector<double>{2, 2, 2}), 0.5);
  EXPECT_DOUBLE_EQ(auc(std::vector<double>{3, 1}, std::vector<double>{2, 0}), 0.75);
  EXPECT_THROW(auc(std::vector<double>{}, std::vector<double>{1}), std::invalid_argument);
}

TEST(Auc, MatchesPairEnumeration) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto pos = draw(13 + seed, seed, seed % 2), neg = draw(9 + 2 * seed, 100 + seed, seed % 2);
    EXPECT_NEAR(auc(pos, neg), pairwise_auc(pos, neg), 1e-14) << seed;
  }
}

TEST(AveragePrecision, Examples) {
  EXPECT_DOUBLE_EQ(average_precision(std::vector<double>{5, 4}, std::vector<double>{1, 0}), 1.0);
  EXPECT_DOUBLE_EQ(average_precision(std::vector<double>{2}, std::vector<double>{3}), 0.5);
  EXPECT_NEAR(average_precision(std::vector<double>{3, 1}, std::vector<double>{2, 0}),
              (1.0 + 2.0 / 3.0) / 2.0, 1e-15);
  EXPECT_THROW(average_precision(std::vector<double>{1}, std::vector<double>{}),
               std::invalid_argument);
}

TEST(AveragePrecision, MatchesThresholdOracleWithTies) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto pos = draw(11 + seed, 200 + seed, true), neg = draw(15, 300 + seed, true);
    EXPECT_NEAR(average_precision(pos, neg), threshold_ap(pos, neg), 1e-14) << seed;
  }
}

TEST(RankingMetrics, InvariantUnderIncreasingTransform) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto pos = draw(20, 400 + seed, seed % 2), neg = draw(25, 500 + seed, seed % 2);
    std::vector<double> tpos, tneg;
    for (double s : pos) tpos.push_back(std::exp(3 * s) - 7);
    for (double s : neg) tneg.push_back(std::exp(3 * s) - 7);
    EXPECT_DOUBLE_EQ(auc(tpos, tneg), auc(pos, neg));
    EXPECT_DOUBLE_EQ(average_precision(tpos, tneg), average_precision(pos, neg));
  }
}

TEST(ScorePairs, Examples) {
  const DenseMatrix eye = DenseMatrix::identity(3);
  const std::vector<NodePair> pairs{{0, 1}, {2, 2}, {1, 0}};
  EXPECT_EQ(score_pairs(eye, pairs), (std::vector<double>{0, 1, 0}));
  const DenseMatrix e = from_eigen(gaussian(10, 4, 1));
  const std::vector<NodePair> rnd{{3, 7}, {9, 0}, {4, 4}, {2, 8}};
  const auto got = score_pairs(e, rnd);
  for (std::size_t k = 0; k < rnd.size(); ++k) {
    double want = 0.0;
    for (std::size_t f = 0; f < 4; ++f) want += e(rnd[k].i, f) * e(rnd[k].j, f);
    EXPECT_NEAR(got[k], want, 1e-14);
  }
  EXPECT_THROW(score_pairs(eye, std::vector<NodePair>{{0, 3}}), std::invalid_argument);
}

TEST(LinkSplit, CountsAndDisjointness) {
  const SparseMatrix g = ring_with_chords(10, 0);  // 10 undirected edges
  const LinkSplit s = make_link_split(g, 0.5, 3);
  EXPECT_EQ(s.test_pos.size(), 5u);
  EXPECT_EQ(s.test_neg.size(), 5u);
  EXPECT_EQ(s.train_adjacency.nnz(), 10u);
  EXPECT_TRUE(s.train_adjacency.is_symmetric());
  for (const NodePair& p : s.test_pos) {
    EXPECT_EQ(s.train_adjacency.at(p.i, p.j), 0.0);
    EXPECT_EQ(s.train_adjacency.at(p.j, p.i), 0.0);
    EXPECT_EQ(g.at(p.i, p.j), 1.0);
  }
  for (const NodePair& p : s.test_neg) {
    EXPECT_NE(p.i, p.j);
    EXPECT_EQ(g.at(p.i, p.j), 0.0);
  }
}

TEST(LinkSplit, ExhaustiveOnRandomGraphs) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const SparseMatrix g = random_graph(40, 0.1, 600 + seed);
    const LinkSplit s = make_link_split(g, 0.3 + 0.04 * seed, seed);
    const std::size_t edges = g.nnz() / 2;
    EXPECT_EQ(s.test_pos.size(), static_cast<std::size_t>(std::floor((0.3 + 0.04 * seed) * edges)));
    EXPECT_EQ(s.test_neg.size(), s.test_pos.size());
    EXPECT_EQ(s.train_adjacency.nnz(), g.nnz() - 2 * s.test_pos.size());
    std::set<std::pair<std::size_t, std::size_t>> removed;
    for (const NodePair& p : s.test_pos) removed.insert({std::min(p.i, p.j), std::max(p.i, p.j)});
    EXPECT_EQ(removed.size(), s.test_pos.size());
    for (const Triplet& t : s.train_adjacency.triplets()) {
      EXPECT_FALSE(removed.count({std::min(t.row, t.col), std::max(t.row, t.col)}));
      EXPECT_EQ(g.at(t.row, t.col), 1.0);
    }
  }
}

TEST(LinkSplit, DirectedGraphRemovesSingleEntries) {
  const SparseMatrix g = random_sparse(30, 30, 0.1, 9, true);
  std::vector<Triplet> t;
  for (const Triplet& x : g.triplets())
    if (x.row != x.col) t.push_back(x);
  const SparseMatrix d = SparseMatrix::from_triplets(30, 30, std::move(t));
  const LinkSplit s = make_link_split(d, 0.5, 1);
  EXPECT_EQ(s.test_pos.size(), d.nnz() / 2);
  EXPECT_EQ(s.train_adjacency.nnz(), d.nnz() - s.test_pos.size());
}

TEST(LinkSplit, CompleteGraphCannotSampleNonEdges) {
  std::vector<Triplet> t;
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j)
      if (i != j) t.push_back({i, j, 1.0});
  const SparseMatrix k4 = SparseMatrix::from_triplets(4, 4, std::move(t));
  EXPECT_THROW(make_link_split(k4, 0.5, 0), DataError);
}

TEST(LinkSplit, DeterministicPerSeed) {
  const SparseMatrix g = random_graph(50, 0.1, 7);
  const LinkSplit a = make_link_split(g, 0.5, 11), b = make_link_split(g, 0.5, 11),
                  c = make_link_split(g, 0.5, 12);
  EXPECT_EQ(a.test_pos, b.test_pos);
  EXPECT_EQ(a.test_neg, b.test_neg);
  EXPECT_EQ(a.train_adjacency, b.train_adjacency);
  EXPECT_NE(a.test_pos, c.test_pos);
  EXPECT_THROW(make_link_split(g, 1.0, 0), std::invalid_argument);
}

TEST(LabeledSplit, StratifiedAndDisjoint) {
  std::vector<int> labels;
  for (int c = 0; c < 3; ++c)
    for (int k = 0; k < 10 * (c + 1); ++k) labels.push_back(c);
  labels.push_back(kUnlabeled);
  labels.push_back(3);  // singleton
  for (double ratio : {0.1, 0.5, 0.9}) {
    const LabeledSplit s = make_labeled_split(labels, ratio, 5);
    std::vector<int> seen(labels.size(), 0);
    for (std::size_t i : s.train_idx) ++seen[i];
    for (std::size_t i : s.test_idx) ++seen[i];
    for (std::size_t i = 0; i < labels.size(); ++i)
      EXPECT_EQ(seen[i], labels[i] == kUnlabeled ? 0 : 1);
    for (int c = 0; c < 3; ++c) {
      const auto n_c = 10 * (c + 1);
      const auto in_train = std::count_if(s.train_idx.begin(), s.train_idx.end(),
                                          [&](std::size_t i) { return labels[i] == c; });
      EXPECT_EQ(in_train, std::clamp<long>(std::lround(ratio * n_c), 1, n_c - 1));
    }
    const bool singleton_in_train =
        std::find(s.train_idx.begin(), s.train_idx.end(), labels.size() - 1) != s.train_idx.end();
    EXPECT_EQ(singleton_in_train, ratio >= 0.5);
  }
}

TEST(LogisticObjective, GradientMatchesFiniteDifferences) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const Eigen::MatrixXd x = gaussian(30, 4, 700 + seed);
    Eigen::VectorXd y(30);
    const Eigen::MatrixXd flips = gaussian(30, 1, 800 + seed);
    for (int i = 0; i < 30; ++i) y(i) = flips(i, 0) > 0 ? 1.0 : -1.0;
    const Eigen::VectorXd wb = gaussian(5, 1, 900 + seed).col(0);
    const double reg = 0.1 + 0.5 * static_cast<double>(seed);
    std::vector<double> grad;
    const std::vector<double> yv(y.data(), y.data() + 30), wv(wb.data(), wb.data() + 5);
    const double loss = logistic_objective(from_eigen(x), yv, wv, reg, &grad);
    EXPECT_NEAR(loss, oracle_loss(x, y, wb, reg), 1e-13);
    for (int k = 0; k < 5; ++k) {
      const double h = 1e-6;
      Eigen::VectorXd plus = wb, minus = wb;
      plus(k) += h;
      minus(k) -= h;
      const double fd = (oracle_loss(x, y, plus, reg) - oracle_loss(x, y, minus, reg)) / (2 * h);
      EXPECT_NEAR(grad[k], fd, 1e-5 * std::max(1.0, std::abs(fd))) << seed << " " << k;
    }
  }
}

TEST(FitBinaryLogReg, LossMonotoneAcrossAcceptedSteps) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const Blobs b = blobs(20, 1000 + seed);
    std::vector<double> y;
    for (int l : b.labels) y.push_back(l == 1 ? 1.0 : -1.0);
    const BinaryLogReg fit = fit_binary_logreg(b.x, y, LogRegConfig{});
    ASSERT_GE(fit.loss_history.size(), 2u);
    for (std::size_t k = 1; k < fit.loss_history.size(); ++k)
      EXPECT_LE(fit.loss_history[k], fit.loss_history[k - 1]);
  }
}

TEST(TrainLogRegOvr, SeparableToy) {
  const DenseMatrix x = DenseMatrix::from_rows({{0, 0}, {0, 1}, {3, 3}, {3, 4}});
  const std::vector<int> y{0, 0, 1, 1};
  const ClassifierWeights m = train_logreg_ovr(x, y, LogRegConfig{});
  EXPECT_EQ(predict(m, x), y);
}

TEST(TrainLogRegOvr, HeavyRegularizationPredictsMajority) {
  const Blobs b = blobs(10, 3);
  std::vector<int> y = b.labels;
  for (std::size_t i = 0; i < 8; ++i) y[3 * i + 1] = 0;  // class 0 is the majority
  LogRegConfig cfg;
  cfg.reg_strength = 1e9;
  const ClassifierWeights m = train_logreg_ovr(b.x, y, cfg);
  for (double v : m.w.data()) EXPECT_LT(std::abs(v), 1e-5);
  for (int p : predict(m, b.x)) EXPECT_EQ(p, 0);
}

TEST(TrainLogRegOvr, ThreeBlobsGeneralize) {
  const Blobs train = blobs(100, 11), test = blobs(100, 12);
  const ClassifierWeights m = train_logreg_ovr(train.x, train.labels, LogRegConfig{});
  const auto pred = predict(m, test.x);
  std::size_t hits = 0;
  for (std::size_t i = 0; i < pred.size(); ++i) hits += pred[i] == test.labels[i];
  EXPECT_GT(static_cast<double>(hits) / static_cast<double>(pred.size()), 0.95);
}

TEST(TrainLogRegOvr, AbsentClassNeverPredicted) {
  const Blobs b = blobs(10, 13);
  std::vector<int> y = b.labels;
  for (int& l : y)
    if (l == 1) l = 3;  // classes 0, 2, 3; class 1 absent
  const ClassifierWeights m = train_logreg_ovr(b.x, y, LogRegConfig{});
  EXPECT_EQ(m.bias[1], -std::numeric_limits<double>::infinity());
  for (int p : predict(m, b.x)) EXPECT_NE(p, 1);
  EXPECT_THROW(train_logreg_ovr(b.x, std::vector<int>(30, 2), LogRegConfig{}),
               std::invalid_argument);
}

TEST(F1Scores, Examples) {
  const std::vector<int> t{0, 1, 2, 1};
  EXPECT_EQ(f1_scores(t, t).micro, 1.0);
  EXPECT_EQ(f1_scores(t, t).macro, 1.0);
  const F1Scores half = f1_scores(std::vector<int>{0, 0, 0, 0}, std::vector<int>{0, 0, 1, 1});
  EXPECT_DOUBLE_EQ(half.micro, 0.5);
  EXPECT_NEAR(half.macro, 1.0 / 3.0, 1e-15);
  // class 2 never predicted: F1_2 = 0
  const F1Scores miss = f1_scores(std::vector<int>{0, 1, 1}, std::vector<int>{0, 1, 2});
  EXPECT_NEAR(miss.macro, (1.0 + 2.0 / 3.0 + 0.0) / 3.0, 1e-15);
  // class 3 absent everywhere still counts when n_classes says so
  EXPECT_NEAR(f1_scores(t, t, 4).macro, 0.75, 1e-15);
  EXPECT_THROW(f1_scores(std::vector<int>{0}, std::vector<int>{0, 1}), std::invalid_argument);
}

TEST(NodeClassification, SchemaAndReproducibility) {
  const Blobs b = blobs(30, 14);
  NodeClassificationConfig cfg;
  cfg.n_shuffles = 3;
  cfg.seed = 21;
  const NodeClassificationReport r = run_node_classification(b.x, b.labels, cfg);
  EXPECT_EQ(r.runs.size(), 9u);
  ASSERT_EQ(r.summary.size(), 3u);
  for (const ClassificationSummary& s : r.summary) {
    EXPECT_EQ(s.n_train + s.n_test, 90u);
    for (double v : {s.micro_mean, s.micro_std, s.macro_mean, s.macro_std}) {
      EXPECT_GE(v, 0.0);
      EXPECT_LE(v, 1.0);
    }
  }
  std::ostringstream summary;
  write_classification_summary_tsv(summary, r);
  std::string header;
  std::getline(std::istringstream(summary.str()) >> std::ws, header);
  EXPECT_EQ(header, "train_ratio\tmicro_mean\tmicro_std\tmacro_mean\tmacro_std\tn_train\tn_test");

  cfg.n_shuffles = 1;
  const auto one = run_node_classification(b.x, b.labels, cfg);
  const auto two = run_node_classification(b.x, b.labels, cfg);
  ASSERT_EQ(one.runs.size(), two.runs.size());
  for (std::size_t k = 0; k < one.runs.size(); ++k) {
    EXPECT_EQ(one.runs[k].micro, two.runs[k].micro);
    EXPECT_EQ(one.runs[k].macro, two.runs[k].macro);
    EXPECT_EQ(one.runs[k].seed, two.runs[k].seed);
  }
}

TEST(NodeClassification, UnlabeledNodesIgnored) {
  Blobs b = blobs(20, 15);
  b.labels[0] = kUnlabeled;
  b.labels[5] = kUnlabeled;
  NodeClassificationConfig cfg;
  cfg.n_shuffles = 1;
  cfg.train_ratios = {0.5};
  const auto r = run_node_classification(b.x, b.labels, cfg);
  EXPECT_EQ(r.summary[0].n_train + r.summary[0].n_test, 58u);
}

TEST(MeanStd, PopulationDeviation) {
  const auto [m, s] = mean_std(std::vector<double>{1, 2, 3, 4});
  EXPECT_DOUBLE_EQ(m, 2.5);
  EXPECT_DOUBLE_EQ(s, std::sqrt(1.25));
}

TEST(LambdaGrid, Parsing) {
  const auto g = parse_lambda_grid("1:0:0.1");
  ASSERT_EQ(g.size(), 11u);
  EXPECT_DOUBLE_EQ(g.front(), 1.0);
  EXPECT_NEAR(g.back(), 0.0, 1e-15);
  EXPECT_EQ(parse_lambda_grid("0:1:0.5"), (std::vector<double>{0.0, 0.5, 1.0}));
  EXPECT_EQ(parse_lambda_grid("0.2,0.8"), (std::vector<double>{0.2, 0.8}));
  EXPECT_THROW(parse_lambda_grid("0:1:0"), std::invalid_argument);
  EXPECT_THROW(parse_lambda_grid("0:1.5:0.5"), std::invalid_argument);
  EXPECT_THROW(parse_lambda_grid("a,b"), std::invalid_argument);
}

TEST(LambdaSweep, SinglePointMatchesStandaloneRun) {
  const SparseMatrix g = random_graph(40, 0.15, 16);
  const SparseMatrix attrs = random_sparse(40, 12, 0.2, 17, true);
  const LinkSplit split = make_link_split(g, 0.5, 2);
  SolverConfig cfg;
  cfg.rank = 4;
  cfg.lambda = 1.0;
  const EmbedResult r = embed(split.train_adjacency, attrs, cfg);
  const std::vector<double> grid{1.0};
  const auto curve = lambda_sweep(r.factors, grid, [&](const EmbeddingMatrix& e) {
    return evaluate_link_split(e.e, split).auc;
  });
  ASSERT_EQ(curve.size(), 1u);
  EXPECT_EQ(curve[0].metric, evaluate_link_split(r.embedding.e, split).auc);
  EXPECT_THROW(lambda_sweep(r.factors, std::vector<double>{}, [](const EmbeddingMatrix&) {
    return 0.0;
  }), std::invalid_argument);
}

TEST(LambdaSweep, EndpointReproducesFirstSlabDistances) {
  const ExactModel m = make_exact_model(20, 3, 18);
  SolverConfig cfg;
  cfg.rank = 3;
  cfg.tol = 1e-10;
  cfg.max_iter = 200;
  const EmbedResult r = embed(m.y1, m.y2, cfg);
  const std::vector<double> grid{1.0, 0.5, 0.0};
  const auto curve = lambda_sweep(r.factors, grid, [&](const EmbeddingMatrix& em) {
    if (em.lambda != 1.0) return 0.0;
    const Eigen::MatrixXd e = to_eigen(em.e);
    double worst = 0.0;
    for (int i = 0; i < 20; ++i)
      for (int j = i + 1; j < 20; ++j) {
        const double want = m.x1(i, i) + m.x1(j, j) - 2 * m.x1(i, j);
        worst = std::max(worst, std::abs((e.row(i) - e.row(j)).squaredNorm() - want) / want);
      }
    return worst;
  });
  EXPECT_LT(curve[0].metric, 1e-8);
}

TEST(LinkPrediction, RunsPerShuffle) {
  const SparseMatrix g = ring_with_chords(60, 20);
  const SparseMatrix attrs = random_sparse(60, 10, 0.3, 19, true);
  LinkPredictionConfig cfg;
  cfg.n_shuffles = 2;
  cfg.solver.rank = 4;
  cfg.solver.lambda = 1.0;
  const LinkPredictionReport r = run_link_prediction(g, attrs, cfg);
  ASSERT_EQ(r.runs.size(), 2u);
  for (const LinkPredictionRun& run : r.runs) {
    EXPECT_EQ(run.n_test, 80u);  // 40 positives + 40 negatives
    EXPECT_GE(run.auc, 0.0);
    EXPECT_LE(run.auc, 1.0);
  }
  EXPECT_NE(r.runs[0].seed, r.runs[1].seed);
  std::ostringstream out;
  write_link_prediction_tsv(out, r);
  EXPECT_NE(out.str().find("mean\t"), std::string::npos);
}
