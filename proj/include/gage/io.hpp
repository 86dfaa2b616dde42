#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "gage/solver.hpp"
#include "gage/sparse_matrix.hpp"

namespace gage {

/// Coordinate Matrix Market: real | integer | pattern, general | symmetric.
/// Symmetric storage is expanded, duplicates summed, indices made 0-based.
/// Errors are DataError and name the offending line.
SparseMatrix read_matrix_market(std::istream& in, std::string_view source = "<stream>");
SparseMatrix load_matrix_market(const std::filesystem::path& path);
/// Writes `real general` with 17 significant digits.
void save_matrix_market(const SparseMatrix& m, const std::filesystem::path& path);

struct EdgeList {
  SparseMatrix adjacency;               // binary, no self-loops
  std::vector<std::int64_t> node_ids;   // index -> external id
  std::size_t self_loops_dropped = 0;
};

/// `src dst [weight]` per line, whitespace or comma separated; '#' starts a
/// comment. Ids are non-negative integers. With `fixed_ids` the index order is
/// taken from it and unknown ids are an error; otherwise ids get dense indices
/// in first-seen order. Undirected input is mirrored.
EdgeList read_edge_list(std::istream& in, bool directed, std::string_view source = "<stream>",
                        std::span<const std::int64_t> fixed_ids = {});
EdgeList load_edge_list(const std::filesystem::path& path, bool directed,
                        std::span<const std::int64_t> fixed_ids = {});

struct LabelTable {
  /// (external id, dense class id) in file order, duplicates removed.
  std::vector<std::pair<std::int64_t, int>> entries;
  /// Original class names; class id c is class_names[c] (first-seen order).
  std::vector<std::string> class_names;
};

/// `node_id<TAB>class` lines. Repeating a line is fine; relabeling a node is a DataError.
LabelTable read_labels(std::istream& in, std::string_view source = "<stream>");
LabelTable load_labels(const std::filesystem::path& path);

/// One id per line; fixes the node order of a graph.
std::vector<std::int64_t> load_node_ids(const std::filesystem::path& path);

struct AttributedGraph {
  SparseMatrix adjacency;    // N x N
  SparseMatrix attributes;   // N x d
  std::vector<int> labels;   // N entries (kUnlabeled for none), or empty
  std::vector<std::string> class_names;
  std::vector<std::int64_t> node_ids;
  bool directed = false;
  std::size_t self_loops_dropped = 0;

  std::size_t n() const noexcept { return adjacency.n_rows(); }
  /// Undirected edges count once.
  std::size_t edge_count() const noexcept;
  std::size_t class_count() const noexcept { return class_names.size(); }

  /// Compares content; the self-loop counter is a load diagnostic and ignored.
  bool operator==(const AttributedGraph& o) const;
};

struct GraphPaths {
  std::filesystem::path edges;
  std::filesystem::path attributes;
  std::optional<std::filesystem::path> labels;
  std::optional<std::filesystem::path> nodes;
};

/// Attribute row r belongs to external id r. Without a nodes file, nodes are
/// ordered as first seen in the edge list, then ids that only occur in the
/// attributes, ascending. A node with neither edges nor attributes is rejected.
AttributedGraph load_attributed_graph(const GraphPaths& paths, bool directed);

/// Writes edges, attributes, labels and nodes files so that loading them back
/// reproduces `g`. Returns the paths written.
GraphPaths save_attributed_graph(const AttributedGraph& g, const std::filesystem::path& dir,
                                 std::string_view stem);

enum class EmbeddingFormat { Tsv, Binary };

/// Binary if the extension is .bin, TSV otherwise.
EmbeddingFormat format_for_path(const std::filesystem::path& path);

struct StoredEmbeddings {
  EmbeddingMatrix embedding;            // clamped_dims is not persisted
  std::vector<std::int64_t> node_ids;   // empty for binary files
};

/// TSV: a `# gage-embeddings` header line with N, F and lambda, then
/// `node_id` and F values per row at 17 significant digits. Binary: magic
/// "GAGE\0", u32 version, u64 N, u64 F, f64 lambda, row-major f64 payload,
/// u32 CRC32 of the payload; all little-endian.
void save_embeddings(const EmbeddingMatrix& e, std::span<const std::int64_t> node_ids,
                     const std::filesystem::path& path, EmbeddingFormat format);
StoredEmbeddings load_embeddings(const std::filesystem::path& path);

std::uint32_t crc32_of(std::span<const unsigned char> bytes);
std::uint32_t file_crc32(const std::filesystem::path& path);

}  // namespace gage
