#include "gage/io.hpp"

#include <zlib.h>

#include <algorithm>
#include <bit>
#include <cctype>
#include <charconv>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <istream>
#include <map>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "gage/errors.hpp"
#include "gage/evaluation.hpp"

namespace gage {

namespace {

constexpr char kMagic[5] = {'G', 'A', 'G', 'E', '\0'};
constexpr std::uint32_t kBinaryVersion = 1;
constexpr std::string_view kTsvHeader = "# gage-embeddings";

[[noreturn]] void fail(std::string_view source, std::size_t line, const std::string& what) {
  throw DataError(std::string(source) + ":" + std::to_string(line) + ": " + what);
}

std::ifstream open_in(const std::filesystem::path& path, std::ios::openmode mode = {}) {
  std::ifstream in(path, std::ios::in | mode);
  if (!in) throw DataError("cannot open " + path.string());
  return in;
}

std::ofstream open_out(const std::filesystem::path& path, std::ios::openmode mode = {}) {
  std::ofstream out(path, std::ios::out | std::ios::trunc | mode);
  if (!out) throw DataError("cannot write " + path.string());
  return out;
}

void finish_write(std::ofstream& out, const std::filesystem::path& path) {
  out.flush();
  if (!out) throw DataError("failed writing " + path.string());
}

std::string lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

std::vector<std::string_view> split_fields(std::string_view line, bool allow_commas) {
  std::vector<std::string_view> fields;
  std::size_t i = 0;
  auto is_sep = [&](char c) {
    return c == ' ' || c == '\t' || c == '\r' || (allow_commas && c == ',');
  };
  while (i < line.size()) {
    while (i < line.size() && is_sep(line[i])) ++i;
    if (i == line.size()) break;
    std::size_t j = i;
    while (j < line.size() && !is_sep(line[j])) ++j;
    fields.push_back(line.substr(i, j - i));
    i = j;
  }
  return fields;
}

template <typename T>
bool parse_number(std::string_view s, T& out) {
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size() && !s.empty();
}

std::int64_t parse_id(std::string_view field, std::string_view source, std::size_t line) {
  std::int64_t id = 0;
  if (!parse_number(field, id)) fail(source, line, "node id '" + std::string(field) + "' is not an integer");
  if (id < 0) fail(source, line, "negative node id " + std::string(field));
  return id;
}

std::string_view strip_comment(std::string_view line) {
  const std::size_t hash = line.find('#');
  if (hash != std::string_view::npos) line = line.substr(0, hash);
  return line;
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

template <typename T>
void put_le(std::string& buf, T value) {
  auto bits = std::bit_cast<std::array<unsigned char, sizeof(T)>>(value);
  if constexpr (std::endian::native == std::endian::big) std::reverse(bits.begin(), bits.end());
  buf.append(reinterpret_cast<const char*>(bits.data()), bits.size());
}

template <typename T>
T get_le(const unsigned char* p) {
  std::array<unsigned char, sizeof(T)> bits;
  std::memcpy(bits.data(), p, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) std::reverse(bits.begin(), bits.end());
  return std::bit_cast<T>(bits);
}

}  // namespace

SparseMatrix read_matrix_market(std::istream& in, std::string_view source) {
  std::string line;
  std::size_t line_no = 1;
  if (!std::getline(in, line)) fail(source, line_no, "missing Matrix Market header");
  const auto header = split_fields(line, false);
  if (header.size() != 5 || lower(header[0]) != "%%matrixmarket" || lower(header[1]) != "matrix") {
    fail(source, line_no, "malformed Matrix Market header");
  }
  if (lower(header[2]) != "coordinate") fail(source, line_no, "only coordinate format is supported");
  const std::string field = lower(header[3]);
  const std::string symmetry = lower(header[4]);
  if (field != "real" && field != "integer" && field != "pattern") {
    fail(source, line_no, "unsupported field type '" + field + "'");
  }
  if (symmetry != "general" && symmetry != "symmetric") {
    fail(source, line_no, "unsupported symmetry '" + symmetry + "'");
  }
  const bool pattern = field == "pattern";
  const bool symmetric = symmetry == "symmetric";

  std::size_t rows = 0, cols = 0, declared = 0, seen = 0;
  bool have_size = false;
  std::vector<Triplet> entries;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line[0] == '%') continue;
    const auto f = split_fields(line, false);
    if (f.empty()) continue;
    if (!have_size) {
      if (f.size() != 3 || !parse_number(f[0], rows) || !parse_number(f[1], cols) ||
          !parse_number(f[2], declared)) {
        fail(source, line_no, "malformed size line");
      }
      if (symmetric && rows != cols) fail(source, line_no, "symmetric matrix must be square");
      have_size = true;
      entries.reserve(symmetric ? 2 * declared : declared);
      continue;
    }
    if (++seen > declared) fail(source, line_no, "more entries than the declared " + std::to_string(declared));
    const std::size_t expected = pattern ? 2 : 3;
    if (f.size() != expected) {
      fail(source, line_no,
           "expected " + std::to_string(expected) + " fields, found " + std::to_string(f.size()));
    }
    std::size_t i = 0, j = 0;
    if (!parse_number(f[0], i) || !parse_number(f[1], j)) fail(source, line_no, "non-integer index");
    if (i < 1 || i > rows || j < 1 || j > cols) {
      fail(source, line_no,
           "index (" + std::string(f[0]) + ", " + std::string(f[1]) + ") out of range");
    }
    double v = 1.0;
    if (field == "integer") {
      long long iv = 0;
      if (!parse_number(f[2], iv)) fail(source, line_no, "non-integer value '" + std::string(f[2]) + "'");
      v = static_cast<double>(iv);
    } else if (!pattern && (!parse_number(f[2], v) || !std::isfinite(v))) {
      fail(source, line_no, "non-numeric value '" + std::string(f[2]) + "'");
    }
    entries.push_back({i - 1, j - 1, v});
    if (symmetric && i != j) entries.push_back({j - 1, i - 1, v});
  }
  if (!have_size) fail(source, line_no, "missing size line");
  if (seen < declared) {
    fail(source, line_no,
         "file ends after " + std::to_string(seen) + " of " + std::to_string(declared) + " entries");
  }
  return SparseMatrix::from_triplets(rows, cols, std::move(entries));
}

SparseMatrix load_matrix_market(const std::filesystem::path& path) {
  std::ifstream in = open_in(path);
  return read_matrix_market(in, path.string());
}

void save_matrix_market(const SparseMatrix& m, const std::filesystem::path& path) {
  std::ofstream out = open_out(path);
  out << "%%MatrixMarket matrix coordinate real general\n"
      << m.n_rows() << ' ' << m.n_cols() << ' ' << m.nnz() << '\n';
  for (const Triplet& t : m.triplets()) {
    out << t.row + 1 << ' ' << t.col + 1 << ' ' << format_double(t.value) << '\n';
  }
  finish_write(out, path);
}

EdgeList read_edge_list(std::istream& in, bool directed, std::string_view source,
                        std::span<const std::int64_t> fixed_ids) {
  EdgeList out;
  std::unordered_map<std::int64_t, std::size_t> index;
  const bool fixed = !fixed_ids.empty();
  for (std::int64_t id : fixed_ids) {
    if (id < 0) throw DataError(std::string(source) + ": negative node id in node list");
    if (!index.emplace(id, index.size()).second) {
      throw DataError(std::string(source) + ": node list repeats id " + std::to_string(id));
    }
  }
  if (fixed) out.node_ids.assign(fixed_ids.begin(), fixed_ids.end());

  auto lookup = [&](std::int64_t id, std::size_t line_no) {
    auto it = index.find(id);
    if (it != index.end()) return it->second;
    if (fixed) fail(source, line_no, "node id " + std::to_string(id) + " is not in the node list");
    index.emplace(id, out.node_ids.size());
    out.node_ids.push_back(id);
    return out.node_ids.size() - 1;
  };

  std::vector<Triplet> entries;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto f = split_fields(strip_comment(line), true);
    if (f.empty()) continue;
    if (f.size() < 2 || f.size() > 3) {
      fail(source, line_no, "expected 'src dst [weight]', found " + std::to_string(f.size()) + " fields");
    }
    const std::size_t src = lookup(parse_id(f[0], source, line_no), line_no);
    const std::size_t dst = lookup(parse_id(f[1], source, line_no), line_no);
    double w = 1.0;
    if (f.size() == 3 && (!parse_number(f[2], w) || !std::isfinite(w))) {
      fail(source, line_no, "non-numeric weight '" + std::string(f[2]) + "'");
    }
    if (w == 0.0) continue;
    if (src == dst) {
      ++out.self_loops_dropped;
      continue;
    }
    entries.push_back({src, dst, 1.0});
    if (!directed) entries.push_back({dst, src, 1.0});
  }
  const std::size_t n = out.node_ids.size();
  // Binarize after duplicates were summed.
  SparseMatrix summed = SparseMatrix::from_triplets(n, n, std::move(entries));
  std::vector<double> ones(summed.nnz(), 1.0);
  out.adjacency = SparseMatrix::from_csr(
      n, n, {summed.row_ptr().begin(), summed.row_ptr().end()},
      {summed.col_idx().begin(), summed.col_idx().end()}, std::move(ones));
  return out;
}

EdgeList load_edge_list(const std::filesystem::path& path, bool directed,
                        std::span<const std::int64_t> fixed_ids) {
  std::ifstream in = open_in(path);
  return read_edge_list(in, directed, path.string(), fixed_ids);
}

LabelTable read_labels(std::istream& in, std::string_view source) {
  LabelTable table;
  std::unordered_map<std::string, int> class_ids;
  std::unordered_map<std::int64_t, int> assigned;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    const std::size_t tab = line.find('\t');
    if (tab == std::string::npos || line.find('\t', tab + 1) != std::string::npos) {
      fail(source, line_no, "expected 'node_id<TAB>class'");
    }
    const std::int64_t id = parse_id(std::string_view(line).substr(0, tab), source, line_no);
    const std::string name = line.substr(tab + 1);
    if (name.empty()) fail(source, line_no, "empty class name");
    auto [cls, fresh] = class_ids.emplace(name, static_cast<int>(table.class_names.size()));
    if (fresh) table.class_names.push_back(name);
    auto [prev, first] = assigned.emplace(id, cls->second);
    if (!first) {
      if (prev->second != cls->second) {
        fail(source, line_no, "node " + std::to_string(id) + " relabeled from '" +
                                  table.class_names[static_cast<std::size_t>(prev->second)] +
                                  "' to '" + name + "'");
      }
      continue;
    }
    table.entries.emplace_back(id, cls->second);
  }
  return table;
}

LabelTable load_labels(const std::filesystem::path& path) {
  std::ifstream in = open_in(path);
  return read_labels(in, path.string());
}

std::vector<std::int64_t> load_node_ids(const std::filesystem::path& path) {
  std::ifstream in = open_in(path);
  std::vector<std::int64_t> ids;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto f = split_fields(strip_comment(line), false);
    if (f.empty()) continue;
    if (f.size() != 1) fail(path.string(), line_no, "expected one node id per line");
    ids.push_back(parse_id(f[0], path.string(), line_no));
  }
  return ids;
}

std::size_t AttributedGraph::edge_count() const noexcept {
  return directed ? adjacency.nnz() : adjacency.nnz() / 2;
}

AttributedGraph load_attributed_graph(const GraphPaths& paths, bool directed) {
  AttributedGraph g;
  g.directed = directed;
  std::vector<std::int64_t> fixed;
  if (paths.nodes) {
    fixed = load_node_ids(*paths.nodes);
    if (fixed.empty()) throw DataError(paths.nodes->string() + ": node list is empty");
  }
  EdgeList edges = load_edge_list(paths.edges, directed, fixed);
  const SparseMatrix raw_attrs = load_matrix_market(paths.attributes);
  g.self_loops_dropped = edges.self_loops_dropped;
  g.node_ids = std::move(edges.node_ids);

  std::unordered_map<std::int64_t, std::size_t> index;
  for (std::size_t k = 0; k < g.node_ids.size(); ++k) index.emplace(g.node_ids[k], k);
  for (std::size_t r = 0; r < raw_attrs.n_rows(); ++r) {
    const auto id = static_cast<std::int64_t>(r);
    if (index.contains(id)) continue;
    if (paths.nodes) {
      if (raw_attrs.row_nnz(r) != 0) {
        throw DataError(paths.attributes.string() + ": attribute row " + std::to_string(r + 1) +
                        " belongs to id " + std::to_string(id) + ", which is not in the node list");
      }
      continue;
    }
    index.emplace(id, g.node_ids.size());
    g.node_ids.push_back(id);
  }
  const std::size_t n = g.node_ids.size();
  if (n == 0) throw DataError("graph has no nodes");

  std::vector<Triplet> edge_entries = edges.adjacency.triplets();
  g.adjacency = SparseMatrix::from_triplets(n, n, std::move(edge_entries));
  std::vector<Triplet> attr_entries;
  attr_entries.reserve(raw_attrs.nnz());
  for (const Triplet& t : raw_attrs.triplets()) {
    auto it = index.find(static_cast<std::int64_t>(t.row));
    if (it != index.end()) attr_entries.push_back({it->second, t.col, t.value});
  }
  g.attributes = SparseMatrix::from_triplets(n, raw_attrs.n_cols(), std::move(attr_entries));

  for (std::size_t k = 0; k < n; ++k) {
    if (g.adjacency.row_nnz(k) == 0 && g.attributes.row_nnz(k) == 0) {
      throw DataError("node " + std::to_string(g.node_ids[k]) + " has neither edges nor attributes");
    }
  }

  if (paths.labels) {
    LabelTable table = load_labels(*paths.labels);
    g.labels.assign(n, kUnlabeled);
    for (const auto& [id, cls] : table.entries) {
      auto it = index.find(id);
      if (it == index.end()) {
        throw DataError(paths.labels->string() + ": label for unknown node " + std::to_string(id));
      }
      g.labels[it->second] = cls;
    }
    g.class_names = std::move(table.class_names);
  }
  return g;
}

bool AttributedGraph::operator==(const AttributedGraph& o) const {
  return adjacency == o.adjacency && attributes == o.attributes && labels == o.labels &&
         class_names == o.class_names && node_ids == o.node_ids && directed == o.directed;
}

GraphPaths save_attributed_graph(const AttributedGraph& g, const std::filesystem::path& dir,
                                 std::string_view stem) {
  GraphPaths paths;
  const std::string base = std::string(stem);
  paths.edges = dir / (base + ".edges");
  paths.attributes = dir / (base + ".attrs.mtx");
  paths.nodes = dir / (base + ".nodes");
  const std::size_t n = g.n();

  {
    std::ofstream out = open_out(*paths.nodes);
    for (std::int64_t id : g.node_ids) out << id << '\n';
    finish_write(out, *paths.nodes);
  }
  {
    std::ofstream out = open_out(paths.edges);
    for (const Triplet& t : g.adjacency.triplets()) {
      if (!g.directed && t.row > t.col) continue;
      out << g.node_ids[t.row] << '\t' << g.node_ids[t.col] << '\n';
    }
    finish_write(out, paths.edges);
  }
  {
    std::int64_t max_id = -1;
    for (std::int64_t id : g.node_ids) max_id = std::max(max_id, id);
    std::vector<Triplet> rows;
    for (const Triplet& t : g.attributes.triplets()) {
      rows.push_back({static_cast<std::size_t>(g.node_ids[t.row]), t.col, t.value});
    }
    save_matrix_market(SparseMatrix::from_triplets(static_cast<std::size_t>(max_id + 1),
                                                   g.attributes.n_cols(), std::move(rows)),
                       paths.attributes);
  }
  if (!g.labels.empty()) {
    paths.labels = dir / (base + ".labels");
    std::ofstream out = open_out(*paths.labels);
    // One representative per class first, so classes reload with the same ids.
    std::vector<bool> written(n, false);
    for (std::size_t c = 0; c < g.class_names.size(); ++c) {
      for (std::size_t k = 0; k < n; ++k) {
        if (g.labels[k] == static_cast<int>(c)) {
          out << g.node_ids[k] << '\t' << g.class_names[c] << '\n';
          written[k] = true;
          break;
        }
      }
    }
    for (std::size_t k = 0; k < n; ++k) {
      if (written[k] || g.labels[k] == kUnlabeled) continue;
      out << g.node_ids[k] << '\t' << g.class_names[static_cast<std::size_t>(g.labels[k])] << '\n';
    }
    finish_write(out, *paths.labels);
  }
  return paths;
}

EmbeddingFormat format_for_path(const std::filesystem::path& path) {
  return path.extension() == ".bin" ? EmbeddingFormat::Binary : EmbeddingFormat::Tsv;
}

std::uint32_t crc32_of(std::span<const unsigned char> bytes) {
  uLong crc = crc32(0L, Z_NULL, 0);
  std::size_t offset = 0;
  while (offset < bytes.size()) {
    const auto chunk = static_cast<uInt>(std::min<std::size_t>(bytes.size() - offset, 1u << 30));
    crc = crc32(crc, bytes.data() + offset, chunk);
    offset += chunk;
  }
  return static_cast<std::uint32_t>(crc);
}

std::uint32_t file_crc32(const std::filesystem::path& path) {
  std::ifstream in = open_in(path, std::ios::binary);
  uLong crc = crc32(0L, Z_NULL, 0);
  std::vector<char> buf(1 << 16);
  while (in) {
    in.read(buf.data(), static_cast<std::streamsize>(buf.size()));
    const auto got = static_cast<uInt>(in.gcount());
    if (got > 0) crc = crc32(crc, reinterpret_cast<const Bytef*>(buf.data()), got);
  }
  return static_cast<std::uint32_t>(crc);
}

void save_embeddings(const EmbeddingMatrix& e, std::span<const std::int64_t> node_ids,
                     const std::filesystem::path& path, EmbeddingFormat format) {
  const std::size_t n = e.e.rows();
  const std::size_t f = e.e.cols();
  if (!node_ids.empty() && node_ids.size() != n) {
    throw std::invalid_argument("save_embeddings: one node id per row required");
  }
  if (format == EmbeddingFormat::Tsv) {
    std::ofstream out = open_out(path);
    out << kTsvHeader << '\t' << n << '\t' << f << '\t' << format_double(e.lambda) << '\n';
    for (std::size_t i = 0; i < n; ++i) {
      out << (node_ids.empty() ? static_cast<std::int64_t>(i) : node_ids[i]);
      for (double v : e.e.row(i)) out << '\t' << format_double(v);
      out << '\n';
    }
    finish_write(out, path);
    return;
  }
  std::string buf;
  buf.reserve(33 + 8 * n * f + 4);
  buf.append(kMagic, sizeof kMagic);
  put_le<std::uint32_t>(buf, kBinaryVersion);
  put_le<std::uint64_t>(buf, n);
  put_le<std::uint64_t>(buf, f);
  put_le<double>(buf, e.lambda);
  const std::size_t payload_start = buf.size();
  for (double v : e.e.data()) put_le<double>(buf, v);
  const auto* bytes = reinterpret_cast<const unsigned char*>(buf.data());
  put_le<std::uint32_t>(buf, crc32_of({bytes + payload_start, buf.size() - payload_start}));
  std::ofstream out = open_out(path, std::ios::binary);
  out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
  finish_write(out, path);
}

namespace {

StoredEmbeddings load_binary_embeddings(const std::filesystem::path& path) {
  std::ifstream in = open_in(path, std::ios::binary);
  const std::string buf((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  const auto* p = reinterpret_cast<const unsigned char*>(buf.data());
  constexpr std::size_t kHeader = 5 + 4 + 8 + 8 + 8;
  if (buf.size() < kHeader + 4 || std::memcmp(p, kMagic, sizeof kMagic) != 0) {
    throw DataError(path.string() + ": not a binary embeddings file");
  }
  const auto version = get_le<std::uint32_t>(p + 5);
  if (version != kBinaryVersion) {
    throw DataError(path.string() + ": unsupported version " + std::to_string(version));
  }
  const auto n = get_le<std::uint64_t>(p + 9);
  const auto f = get_le<std::uint64_t>(p + 17);
  const double lambda = get_le<double>(p + 25);
  if (f != 0 && n > (buf.size() / 8) / f) throw DataError(path.string() + ": size fields corrupt");
  const std::size_t payload = 8 * n * f;
  if (buf.size() != kHeader + payload + 4) {
    throw DataError(path.string() + ": expected " + std::to_string(kHeader + payload + 4) +
                    " bytes, found " + std::to_string(buf.size()));
  }
  const auto stored_crc = get_le<std::uint32_t>(p + kHeader + payload);
  if (crc32_of({p + kHeader, payload}) != stored_crc) {
    throw DataError(path.string() + ": payload CRC32 mismatch");
  }
  StoredEmbeddings out;
  out.embedding.lambda = lambda;
  out.embedding.e = DenseMatrix(n, f);
  auto data = out.embedding.e.data();
  for (std::size_t k = 0; k < n * f; ++k) data[k] = get_le<double>(p + kHeader + 8 * k);
  return out;
}

StoredEmbeddings load_tsv_embeddings(const std::filesystem::path& path) {
  std::ifstream in = open_in(path);
  const std::string source = path.string();
  std::string line;
  std::size_t line_no = 1;
  if (!std::getline(in, line)) fail(source, line_no, "empty embeddings file");
  const auto header = split_fields(line, false);
  std::size_t n = 0, f = 0;
  double lambda = 0.0;
  if (header.size() != 5 || std::string(header[0]) + " " + std::string(header[1]) != kTsvHeader ||
      !parse_number(header[2], n) || !parse_number(header[3], f) ||
      !parse_number(header[4], lambda)) {
    fail(source, line_no, "malformed embeddings header");
  }
  StoredEmbeddings out;
  out.embedding.lambda = lambda;
  out.embedding.e = DenseMatrix(n, f);
  std::size_t row = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto fields = split_fields(line, false);
    if (fields.empty()) continue;
    if (row >= n) fail(source, line_no, "more rows than the header declares");
    if (fields.size() != f + 1) {
      fail(source, line_no, "expected " + std::to_string(f + 1) + " fields");
    }
    out.node_ids.push_back(parse_id(fields[0], source, line_no));
    auto dst = out.embedding.e.row(row);
    for (std::size_t j = 0; j < f; ++j) {
      if (!parse_number(fields[j + 1], dst[j])) fail(source, line_no, "non-numeric value");
    }
    ++row;
  }
  if (row != n) fail(source, line_no, "fewer rows than the header declares");
  return out;
}

}  // namespace

StoredEmbeddings load_embeddings(const std::filesystem::path& path) {
  std::ifstream probe = open_in(path, std::ios::binary);
  char head[5] = {};
  probe.read(head, 5);
  if (probe.gcount() == 5 && std::memcmp(head, kMagic, 5) == 0) return load_binary_embeddings(path);
  return load_tsv_embeddings(path);
}

}  // namespace gage
