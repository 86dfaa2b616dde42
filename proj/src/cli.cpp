#include "gage/cli.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>
#include <unordered_map>

#include "CLI11.hpp"
#include "json.hpp"

#include "gage/errors.hpp"
#include "gage/evaluation.hpp"
#include "gage/io.hpp"
#include "gage/kernels.hpp"
#include "gage/solver.hpp"

#ifndef GAGE_VERSION
#define GAGE_VERSION "dev"
#endif

namespace gage {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct GraphOptions {
  std::string graph;
  std::string attrs;
  std::string labels;
  std::string nodes;
  bool directed = false;

  GraphPaths paths() const {
    GraphPaths p{graph, attrs, std::nullopt, std::nullopt};
    if (!labels.empty()) p.labels = labels;
    if (!nodes.empty()) p.nodes = nodes;
    return p;
  }
};

struct SolverOptions {
  std::size_t rank = 16;
  double lambda = 0.8;
  double tol = 1e-6;
  std::size_t max_iter = 50;
  std::uint64_t seed = 0;
  std::string init = "evd";

  SolverConfig config() const {
    SolverConfig c;
    c.rank = rank;
    c.lambda = lambda;
    c.tol = tol;
    c.max_iter = max_iter;
    c.seed = seed;
    c.init = parse_init_method(init);
    return c;
  }
};

void add_graph_options(CLI::App* cmd, GraphOptions& g, bool labels_flag) {
  cmd->add_option("--graph", g.graph, "Edge list: src dst [weight] per line")->required();
  cmd->add_option("--attrs", g.attrs, "Attribute matrix (Matrix Market, row r = node id r)")
      ->required();
  if (labels_flag) cmd->add_option("--labels", g.labels, "Labels: node_id<TAB>class");
  cmd->add_option("--nodes", g.nodes, "Node order: one id per line");
  cmd->add_flag("--directed", g.directed, "Treat edges as directed");
}

void add_solver_options(CLI::App* cmd, SolverOptions& s) {
  cmd->add_option("--rank", s.rank, "Embedding dimension F")->capture_default_str();
  cmd->add_option("--lambda", s.lambda, "Weight of the connectivity slab")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  cmd->add_option("--tol", s.tol, "ALS relative factor-change tolerance")->capture_default_str();
  cmd->add_option("--max-iter", s.max_iter, "Maximum ALS sweeps")->capture_default_str();
  cmd->add_option("--seed", s.seed, "Random seed")->capture_default_str();
  cmd->add_option("--init", s.init, "Initializer")
      ->check(CLI::IsMember({"evd", "paper-box", "paper-text", "random"}))
      ->capture_default_str();
}

json file_record(const std::string& path) {
  const fs::path p(path);
  return {{"path", fs::absolute(p).string()},
          {"crc32", file_crc32(p)},
          {"bytes", fs::file_size(p)}};
}

json graph_inputs(const GraphOptions& g) {
  json inputs = {{"graph", file_record(g.graph)}, {"attrs", file_record(g.attrs)}};
  if (!g.labels.empty()) inputs["labels"] = file_record(g.labels);
  if (!g.nodes.empty()) inputs["nodes"] = file_record(g.nodes);
  return inputs;
}

json solver_json(const SolverOptions& s) {
  return {{"rank", s.rank}, {"lambda", s.lambda}, {"tol", s.tol},
          {"max_iter", s.max_iter}, {"seed", s.seed}, {"init", s.init}};
}

json embed_diagnostics(const EmbedResult& r) {
  return {{"init_degenerate", r.init.degenerate},
          {"init_complex_pairs", r.init.complex_pairs},
          {"init_regularized", r.init.regularized},
          {"subspace_iterations", r.init.subspace_iterations},
          {"subspace_converged", r.init.subspace_converged},
          {"als_sweeps", r.als.sweeps},
          {"als_final_change", r.als.final_change},
          {"als_converged", r.als.converged},
          {"als_regularized", r.als.regularized},
          {"clamped_dims", r.embedding.clamped_dims},
          {"init_seconds", r.init_seconds},
          {"als_seconds", r.als_seconds}};
}

json manifest_base(std::string_view command, std::span<const std::string> args) {
  return {{"tool", "gage"},
          {"version", GAGE_VERSION},
          {"command", command},
          {"argv", std::vector<std::string>(args.begin(), args.end())},
          {"threads", num_threads()}};
}

void write_manifest(const json& manifest, const std::string& output_path) {
  const fs::path path = output_path + ".manifest.json";
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path.string());
  out << manifest.dump(2) << '\n';
  if (!out) throw DataError("failed writing " + path.string());
}

std::ofstream open_report(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path);
  out.precision(17);
  return out;
}

std::string summary_path(const std::string& report) {
  const fs::path p(report);
  return (p.parent_path() / (p.stem().string() + ".summary" + p.extension().string())).string();
}

std::vector<double> parse_ratio_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != item.size() || !(v > 0.0 && v < 1.0)) {
      throw std::invalid_argument("split ratios must be numbers in (0, 1): '" + item + "'");
    }
    out.push_back(v);
  }
  if (out.empty()) throw std::invalid_argument("no split ratios given");
  return out;
}

EmbedResult run_embedding(const AttributedGraph& g, const SolverConfig& cfg, std::ostream& err) {
  if (g.self_loops_dropped > 0) err << "warning: dropped " << g.self_loops_dropped << " self-loops\n";
  EmbedResult r = embed(g.adjacency, g.attributes, cfg);
  if (!r.als.converged) {
    err << "warning: ALS stopped after " << r.als.sweeps << " sweeps (change "
        << r.als.final_change << ")\n";
  }
  if (r.init.degenerate) err << "warning: initializer was degenerate; started from the subspace basis\n";
  if (!r.embedding.clamped_dims.empty()) {
    err << "warning: " << r.embedding.clamped_dims.size()
        << " dimensions had negative weight and were clamped to zero\n";
  }
  return r;
}

std::vector<int> labels_for_rows(const LabelTable& table, std::span<const std::int64_t> node_ids,
                                 std::ostream& err) {
  std::unordered_map<std::int64_t, std::size_t> row;
  for (std::size_t i = 0; i < node_ids.size(); ++i) row.emplace(node_ids[i], i);
  std::vector<int> labels(node_ids.size(), kUnlabeled);
  std::size_t unknown = 0;
  for (const auto& [id, cls] : table.entries) {
    auto it = row.find(id);
    if (it == row.end()) {
      ++unknown;
      continue;
    }
    labels[it->second] = cls;
  }
  if (unknown > 0) err << "warning: " << unknown << " labeled ids have no embedding row\n";
  return labels;
}

// ---- subcommands ----------------------------------------------------------

struct EmbedCommand {
  GraphOptions graph;
  SolverOptions solver;
  std::string out;
  std::string format;
  std::string from_manifest;
};

void load_embed_manifest(EmbedCommand& cmd) {
  std::ifstream in(cmd.from_manifest);
  if (!in) throw DataError("cannot open " + cmd.from_manifest);
  const json m = json::parse(in);
  if (m.at("command") != "embed") throw DataError(cmd.from_manifest + ": not an embed manifest");
  const json& inputs = m.at("inputs");
  auto input_path = [&](const char* key) -> std::string {
    if (!inputs.contains(key)) return {};
    const json& rec = inputs.at(key);
    const std::string path = rec.at("path");
    if (file_crc32(path) != rec.at("crc32").get<std::uint32_t>()) {
      throw DataError(path + ": contents changed since the manifest was written (CRC32 mismatch)");
    }
    return path;
  };
  cmd.graph.graph = input_path("graph");
  cmd.graph.attrs = input_path("attrs");
  cmd.graph.labels = input_path("labels");
  cmd.graph.nodes = input_path("nodes");
  const json& cfg = m.at("config");
  cmd.graph.directed = cfg.at("directed");
  const json& s = cfg.at("solver");
  cmd.solver.rank = s.at("rank");
  cmd.solver.lambda = s.at("lambda");
  cmd.solver.tol = s.at("tol");
  cmd.solver.max_iter = s.at("max_iter");
  cmd.solver.seed = s.at("seed");
  cmd.solver.init = s.at("init");
  if (cmd.format.empty()) cmd.format = cfg.at("format");
}

int run_embed(EmbedCommand& cmd, std::span<const std::string> args, std::ostream& out,
              std::ostream& err) {
  if (!cmd.from_manifest.empty()) load_embed_manifest(cmd);
  if (cmd.graph.graph.empty() || cmd.graph.attrs.empty()) {
    throw std::invalid_argument("embed needs --graph and --attrs (or --from-manifest)");
  }
  const EmbeddingFormat format = cmd.format.empty() ? format_for_path(cmd.out)
                                 : cmd.format == "bin" ? EmbeddingFormat::Binary
                                                       : EmbeddingFormat::Tsv;
  const std::string format_name = format == EmbeddingFormat::Binary ? "bin" : "tsv";
  const SolverConfig cfg = cmd.solver.config();
  const AttributedGraph g = load_attributed_graph(cmd.graph.paths(), cmd.graph.directed);
  const EmbedResult r = run_embedding(g, cfg, err);
  save_embeddings(r.embedding, g.node_ids, cmd.out, format);

  json m = manifest_base("embed", args);
  m["config"] = {{"solver", solver_json(cmd.solver)},
                 {"directed", cmd.graph.directed},
                 {"format", format_name}};
  m["seeds"] = {{"solver", cmd.solver.seed}};
  m["inputs"] = graph_inputs(cmd.graph);
  m["node_ids"] = g.node_ids;
  m["outputs"] = {{"embeddings", file_record(cmd.out)}};
  m["diagnostics"] = embed_diagnostics(r);
  write_manifest(m, cmd.out);

  out << "embedded " << g.n() << " nodes in " << cfg.rank << " dimensions: " << r.als.sweeps
      << " ALS sweeps, final change " << r.als.final_change
      << (r.als.converged ? " (converged)" : " (not converged)") << '\n';
  return kExitOk;
}

struct EvalNcCommand {
  std::string embeddings;
  std::string labels;
  std::string splits = "0.9,0.5,0.1";
  std::size_t shuffles = 10;
  std::uint64_t seed = 0;
  std::string report;
  double reg = 1.0;
  std::size_t max_iter = 500;
  bool no_standardize = false;
};

std::vector<std::int64_t> embedding_node_ids(const StoredEmbeddings& s, const std::string& path) {
  if (!s.node_ids.empty()) return s.node_ids;
  // Binary files carry no ids; use the manifest written next to them if there is one.
  const fs::path manifest = path + ".manifest.json";
  if (fs::exists(manifest)) {
    std::ifstream in(manifest);
    const json m = json::parse(in);
    if (m.contains("node_ids")) {
      auto ids = m.at("node_ids").get<std::vector<std::int64_t>>();
      if (ids.size() == s.embedding.e.rows()) return ids;
    }
  }
  std::vector<std::int64_t> ids(s.embedding.e.rows());
  for (std::size_t i = 0; i < ids.size(); ++i) ids[i] = static_cast<std::int64_t>(i);
  return ids;
}

int run_eval_nc(const EvalNcCommand& cmd, std::span<const std::string> args, std::ostream& out,
                std::ostream& err) {
  NodeClassificationConfig cfg;
  cfg.train_ratios = parse_ratio_list(cmd.splits);
  cfg.n_shuffles = cmd.shuffles;
  cfg.seed = cmd.seed;
  cfg.logreg.reg_strength = cmd.reg;
  cfg.logreg.max_iter = cmd.max_iter;
  cfg.standardize = !cmd.no_standardize;

  const StoredEmbeddings stored = load_embeddings(cmd.embeddings);
  const std::vector<std::int64_t> ids = embedding_node_ids(stored, cmd.embeddings);
  const LabelTable table = load_labels(cmd.labels);
  const std::vector<int> labels = labels_for_rows(table, ids, err);
  const NodeClassificationReport report = run_node_classification(stored.embedding.e, labels, cfg);

  {
    std::ofstream runs = open_report(cmd.report);
    write_classification_runs_tsv(runs, report);
    std::ofstream summary = open_report(summary_path(cmd.report));
    write_classification_summary_tsv(summary, report);
  }

  json m = manifest_base("eval-nc", args);
  m["config"] = {{"splits", cfg.train_ratios},
                 {"shuffles", cfg.n_shuffles},
                 {"reg_strength", cfg.logreg.reg_strength},
                 {"max_iter", cfg.logreg.max_iter},
                 {"standardize", cfg.standardize}};
  m["seeds"] = {{"shuffle", cmd.seed}};
  m["inputs"] = {{"embeddings", file_record(cmd.embeddings)}, {"labels", file_record(cmd.labels)}};
  m["outputs"] = {{"runs", file_record(cmd.report)},
                  {"summary", file_record(summary_path(cmd.report))}};
  json summary = json::array();
  for (const ClassificationSummary& s : report.summary) {
    summary.push_back({{"train_ratio", s.train_ratio}, {"micro_mean", s.micro_mean},
                       {"micro_std", s.micro_std}, {"macro_mean", s.macro_mean},
                       {"macro_std", s.macro_std}, {"n_train", s.n_train}, {"n_test", s.n_test}});
  }
  m["results"] = summary;
  write_manifest(m, cmd.report);

  write_classification_summary_tsv(out, report);
  return kExitOk;
}

struct EvalLpCommand {
  GraphOptions graph;
  SolverOptions solver;
  double removal = 0.5;
  std::size_t shuffles = 5;
  std::string report;
};

int run_eval_lp(const EvalLpCommand& cmd, std::span<const std::string> args, std::ostream& out,
                std::ostream& err) {
  LinkPredictionConfig cfg;
  cfg.removal_ratio = cmd.removal;
  cfg.n_shuffles = cmd.shuffles;
  cfg.seed = cmd.solver.seed;
  cfg.solver = cmd.solver.config();
  const AttributedGraph g = load_attributed_graph(cmd.graph.paths(), cmd.graph.directed);
  if (g.self_loops_dropped > 0) err << "warning: dropped " << g.self_loops_dropped << " self-loops\n";
  const LinkPredictionReport report = run_link_prediction(g.adjacency, g.attributes, cfg);
  {
    std::ofstream rep = open_report(cmd.report);
    write_link_prediction_tsv(rep, report);
  }
  json m = manifest_base("eval-lp", args);
  m["config"] = {{"solver", solver_json(cmd.solver)},
                 {"directed", cmd.graph.directed},
                 {"removal", cmd.removal},
                 {"shuffles", cmd.shuffles}};
  m["seeds"] = {{"split", cfg.seed}, {"solver", cmd.solver.seed}};
  m["inputs"] = graph_inputs(cmd.graph);
  m["outputs"] = {{"report", file_record(cmd.report)}};
  m["results"] = {{"auc_mean", report.auc_mean}, {"auc_std", report.auc_std},
                  {"ap_mean", report.ap_mean}, {"ap_std", report.ap_std}};
  write_manifest(m, cmd.report);
  out << "auc\t" << report.auc_mean << " +- " << report.auc_std << '\n'
      << "average_precision\t" << report.ap_mean << " +- " << report.ap_std << '\n';
  return kExitOk;
}

struct SweepCommand {
  GraphOptions graph;
  SolverOptions solver;
  std::string grid = "1.0:0.0:0.1";
  std::string task = "nc";
  double split = 0.5;
  std::size_t shuffles = 10;
  double removal = 0.5;
  std::string report;
};

int run_sweep(const SweepCommand& cmd, std::span<const std::string> args, std::ostream& out,
              std::ostream& err) {
  const std::vector<double> grid = parse_lambda_grid(cmd.grid);
  const AttributedGraph g = load_attributed_graph(cmd.graph.paths(), cmd.graph.directed);
  const SolverConfig cfg = cmd.solver.config();
  std::vector<LambdaPoint> curve;
  std::string metric;
  if (cmd.task == "nc") {
    if (g.labels.empty()) throw std::invalid_argument("sweep-lambda --task nc needs --labels");
    const EmbedResult r = run_embedding(g, cfg, err);
    NodeClassificationConfig nc;
    nc.train_ratios = {cmd.split};
    nc.n_shuffles = cmd.shuffles;
    nc.seed = cmd.solver.seed;
    metric = "micro_f1";
    curve = lambda_sweep(r.factors, grid, [&](const EmbeddingMatrix& e) {
      return run_node_classification(e.e, g.labels, nc).summary.front().micro_mean;
    });
  } else {
    const LinkSplit split = make_link_split(g.adjacency, cmd.removal, cmd.solver.seed);
    AttributedGraph train = g;
    train.adjacency = split.train_adjacency;
    const EmbedResult r = run_embedding(train, cfg, err);
    metric = "auc";
    curve = lambda_sweep(r.factors, grid, [&](const EmbeddingMatrix& e) {
      return evaluate_link_split(e.e, split).auc;
    });
  }
  {
    std::ofstream rep = open_report(cmd.report);
    write_lambda_curve_tsv(rep, curve, metric);
  }
  json m = manifest_base("sweep-lambda", args);
  m["config"] = {{"solver", solver_json(cmd.solver)}, {"directed", cmd.graph.directed},
                 {"grid", grid},  {"task", cmd.task},
                 {"split", cmd.split}, {"shuffles", cmd.shuffles},
                 {"removal", cmd.removal}};
  m["seeds"] = {{"solver", cmd.solver.seed}};
  m["inputs"] = graph_inputs(cmd.graph);
  m["outputs"] = {{"report", file_record(cmd.report)}};
  write_manifest(m, cmd.report);
  write_lambda_curve_tsv(out, curve, metric);
  return kExitOk;
}

int run_stats(const GraphOptions& graph, const std::string& report, std::span<const std::string> args,
              std::ostream& out, std::ostream& err) {
  const AttributedGraph g = load_attributed_graph(graph.paths(), graph.directed);
  if (g.self_loops_dropped > 0) err << "warning: dropped " << g.self_loops_dropped << " self-loops\n";
  std::ostringstream table;
  table << "# Vertices\t# Edges\tAttribute dimension\t# Classes\n"
        << g.n() << '\t' << g.edge_count() << '\t' << g.attributes.n_cols() << '\t'
        << g.class_count() << '\n';
  out << table.str();
  if (!report.empty()) {
    std::ofstream rep = open_report(report);
    rep << table.str();
    rep.close();
    json m = manifest_base("stats", args);
    m["config"] = {{"directed", graph.directed}};
    m["inputs"] = graph_inputs(graph);
    m["outputs"] = {{"report", file_record(report)}};
    m["results"] = {{"vertices", g.n()}, {"edges", g.edge_count()},
                    {"attribute_dimension", g.attributes.n_cols()},
                    {"classes", g.class_count()}, {"self_loops_dropped", g.self_loops_dropped}};
    write_manifest(m, report);
  }
  return kExitOk;
}

}  // namespace

int cli_main(std::span<const std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Attributed graph embedding by coupled tensor factorization", "gage"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(GAGE_VERSION));
  unsigned threads = 1;
  app.add_option("--threads", threads, "Worker threads for sparse kernels")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();

  EmbedCommand embed_cmd;
  CLI::App* embed_app = app.add_subcommand("embed", "Compute node embeddings");
  {
    GraphOptions& g = embed_cmd.graph;
    auto* graph = embed_app->add_option("--graph", g.graph, "Edge list: src dst [weight] per line");
    auto* attrs = embed_app->add_option("--attrs", g.attrs, "Attribute matrix (Matrix Market)");
    embed_app->add_option("--labels", g.labels, "Labels, recorded in the manifest");
    embed_app->add_option("--nodes", g.nodes, "Node order: one id per line");
    embed_app->add_flag("--directed", g.directed, "Treat edges as directed");
    add_solver_options(embed_app, embed_cmd.solver);
    embed_app->add_option("--out", embed_cmd.out, "Output embeddings (.bin for binary)")->required();
    embed_app->add_option("--format", embed_cmd.format, "tsv or bin (default from extension)")
        ->check(CLI::IsMember({"tsv", "bin"}));
    auto* from = embed_app->add_option("--from-manifest", embed_cmd.from_manifest,
                                       "Repeat a recorded embed run; replaces all options but --out and --format");
    from->excludes(graph)->excludes(attrs);
  }

  EvalNcCommand nc_cmd;
  CLI::App* nc_app = app.add_subcommand("eval-nc", "Node classification from embeddings");
  nc_app->add_option("--embeddings", nc_cmd.embeddings, "Embeddings file")->required();
  nc_app->add_option("--labels", nc_cmd.labels, "Labels: node_id<TAB>class")->required();
  nc_app->add_option("--splits", nc_cmd.splits, "Train ratios, comma separated")->capture_default_str();
  nc_app->add_option("--shuffles", nc_cmd.shuffles, "Shuffles per split")->capture_default_str();
  nc_app->add_option("--seed", nc_cmd.seed, "Random seed")->capture_default_str();
  nc_app->add_option("--report", nc_cmd.report, "Per-shuffle TSV; summary goes to <stem>.summary<ext>")
      ->required();
  nc_app->add_option("--reg", nc_cmd.reg, "L2 strength (inverse of C)")->capture_default_str();
  nc_app->add_option("--max-iter", nc_cmd.max_iter, "Classifier iterations")->capture_default_str();
  nc_app->add_flag("--no-standardize", nc_cmd.no_standardize, "Use raw embedding coordinates");

  EvalLpCommand lp_cmd;
  lp_cmd.solver.lambda = 1.0;
  CLI::App* lp_app = app.add_subcommand("eval-lp", "Link prediction with held-out edges");
  add_graph_options(lp_app, lp_cmd.graph, false);
  add_solver_options(lp_app, lp_cmd.solver);
  lp_app->add_option("--removal", lp_cmd.removal, "Fraction of edges held out")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  lp_app->add_option("--shuffles", lp_cmd.shuffles, "Independent splits")->capture_default_str();
  lp_app->add_option("--report", lp_cmd.report, "Report TSV")->required();

  SweepCommand sweep_cmd;
  CLI::App* sweep_app = app.add_subcommand("sweep-lambda", "Metric as a function of lambda");
  add_graph_options(sweep_app, sweep_cmd.graph, true);
  add_solver_options(sweep_app, sweep_cmd.solver);
  sweep_app->add_option("--grid", sweep_cmd.grid, "start:stop:step or a comma list")
      ->capture_default_str();
  sweep_app->add_option("--task", sweep_cmd.task, "nc or lp")
      ->check(CLI::IsMember({"nc", "lp"}))
      ->capture_default_str();
  sweep_app->add_option("--split", sweep_cmd.split, "Train ratio for nc")->capture_default_str();
  sweep_app->add_option("--shuffles", sweep_cmd.shuffles, "Shuffles for nc")->capture_default_str();
  sweep_app->add_option("--removal", sweep_cmd.removal, "Held-out fraction for lp")
      ->capture_default_str();
  sweep_app->add_option("--report", sweep_cmd.report, "Curve TSV")->required();

  GraphOptions stats_graph;
  std::string stats_report;
  CLI::App* stats_app = app.add_subcommand("stats", "Dataset summary");
  add_graph_options(stats_app, stats_graph, true);
  stats_app->add_option("--report", stats_report, "Also write the table here");

  std::vector<const char*> argv{"gage"};
  for (const std::string& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kExitOk : kExitUsage;
  }

  try {
    set_num_threads(threads);
    if (*embed_app) return run_embed(embed_cmd, args, out, err);
    if (*nc_app) return run_eval_nc(nc_cmd, args, out, err);
    if (*lp_app) return run_eval_lp(lp_cmd, args, out, err);
    if (*sweep_app) return run_sweep(sweep_cmd, args, out, err);
    if (*stats_app) return run_stats(stats_graph, stats_report, args, out, err);
  } catch (const DataError& e) {
    err << "data error: " << e.what() << '\n';
    return kExitData;
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const std::invalid_argument& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const json::exception& e) {
    err << "data error: malformed manifest: " << e.what() << '\n';
    return kExitData;
  } catch (const fs::filesystem_error& e) {
    err << "data error: " << e.what() << '\n';
    return kExitData;
  }
  return kExitUsage;
}

}  // namespace gage
