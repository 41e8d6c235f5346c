#include "gnnseed/io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <unordered_map>

namespace gnnseed {

namespace {

bool is_skippable(const std::string& line) {
  for (char c : line) {
    if (std::isspace(static_cast<unsigned char>(c))) continue;
    return c == '#' || c == '%';
  }
  return true;  // blank
}

long long parse_ll(const std::string& tok, const std::string& path, size_t lineno) {
  long long v = 0;
  auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc{} || p != tok.data() + tok.size())
    throw ParseError(path + ":" + std::to_string(lineno) + ": expected an integer, got '" + tok + "'");
  return v;
}

std::ifstream open_or_throw(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path + ": cannot open file");
  return in;
}

}  // namespace

std::vector<std::pair<long long, long long>> read_edge_list(const std::string& path) {
  std::ifstream in = open_or_throw(path);
  std::vector<std::pair<long long, long long>> edges;
  std::string line;
  size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (is_skippable(line)) continue;
    std::istringstream ss(line);
    std::string a, b, rest;
    if (!(ss >> a >> b))
      throw ParseError(path + ":" + std::to_string(lineno) + ": expected two integers");
    ss >> rest;  // optional third column, discarded
    long long u = parse_ll(a, path, lineno);
    long long v = parse_ll(b, path, lineno);
    if (u < 0 || v < 0)
      throw ParseError(path + ":" + std::to_string(lineno) + ": negative node id");
    edges.emplace_back(u, v);
  }
  return edges;
}

std::vector<long long> read_labels(const std::string& path) {
  std::ifstream in = open_or_throw(path);
  std::vector<long long> labels;
  std::string line;
  size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (is_skippable(line)) continue;
    std::istringstream ss(line);
    std::string tok;
    ss >> tok;
    labels.push_back(parse_ll(tok, path, lineno));
  }
  return labels;
}

void write_edge_list(const std::string& path, const Graph& g) {
  std::ofstream out(path);
  if (!out) throw ParseError(path + ": cannot open for writing");
  out << "# undirected simple graph: n=" << g.n << " m=" << g.m << "\n";
  for (int i = 0; i < g.n; ++i)
    for (int j : g.neighbors(i))
      if (i < j) out << i << " " << j << "\n";
}

void write_labels(const std::string& path, const LabelVector& y) {
  std::ofstream out(path);
  if (!out) throw ParseError(path + ": cannot open for writing");
  for (int v : y.values) out << v << "\n";
}

void write_matrix_csv(const std::string& path, const Mat& x) {
  std::ofstream out(path);
  if (!out) throw ParseError(path + ": cannot open for writing");
  char buf[64];
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    for (Eigen::Index j = 0; j < x.cols(); ++j) {
      std::snprintf(buf, sizeof buf, "%.17g", x(i, j));
      out << (j ? "," : "") << buf;
    }
    out << "\n";
  }
}

Dataset load_dataset(const std::string& edge_path, const std::string& label_path) {
  auto raw_edges = read_edge_list(edge_path);
  auto raw_labels = read_labels(label_path);
  const long long n_labels = static_cast<long long>(raw_labels.size());
  if (n_labels == 0) throw SizeMismatchError(label_path + ": empty label file");

  Dataset ds;
  bool compact = true;
  for (const auto& [u, v] : raw_edges)
    if (u >= n_labels || v >= n_labels) {
      compact = false;
      break;
    }

  std::vector<std::pair<int, int>> edges;
  edges.reserve(raw_edges.size());
  if (compact) {
    ds.node_ids.resize(static_cast<size_t>(n_labels));
    for (long long i = 0; i < n_labels; ++i) ds.node_ids[static_cast<size_t>(i)] = i;
    for (const auto& [u, v] : raw_edges)
      edges.emplace_back(static_cast<int>(u), static_cast<int>(v));
  } else {
    std::vector<long long> ids;
    ids.reserve(raw_edges.size() * 2);
    for (const auto& [u, v] : raw_edges) {
      ids.push_back(u);
      ids.push_back(v);
    }
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
    if (static_cast<long long>(ids.size()) != n_labels)
      throw SizeMismatchError(edge_path + ": " + std::to_string(ids.size()) +
                              " distinct node ids vs " + std::to_string(n_labels) +
                              " labels in " + label_path);
    std::unordered_map<long long, int> remap;
    remap.reserve(ids.size());
    for (size_t i = 0; i < ids.size(); ++i) remap[ids[i]] = static_cast<int>(i);
    ds.node_ids = std::move(ids);
    for (const auto& [u, v] : raw_edges) edges.emplace_back(remap[u], remap[v]);
  }

  const int n = static_cast<int>(ds.node_ids.size());
  ds.g = from_edge_list(edges, n);

  // Compact distinct unmasked label values to 0..K-1 in sorted order.
  std::vector<long long> vals;
  for (long long v : raw_labels)
    if (v != -1) vals.push_back(v);
  std::sort(vals.begin(), vals.end());
  vals.erase(std::unique(vals.begin(), vals.end()), vals.end());
  std::unordered_map<long long, int> lmap;
  lmap.reserve(vals.size());
  for (size_t i = 0; i < vals.size(); ++i) lmap[vals[i]] = static_cast<int>(i);

  ds.label_values = std::move(vals);
  ds.y.k = static_cast<int>(ds.label_values.size());
  ds.y.values.resize(raw_labels.size());
  for (size_t i = 0; i < raw_labels.size(); ++i)
    ds.y.values[i] = raw_labels[i] == -1 ? LabelVector::kMasked : lmap[raw_labels[i]];
  return ds;
}

}  // namespace gnnseed
