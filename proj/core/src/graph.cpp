#include "gnnseed/graph.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace gnnseed {

Graph from_edge_list(const std::vector<std::pair<int, int>>& edges, int n) {
  if (n < 0) throw OutOfRangeError("from_edge_list: negative node count");
  std::vector<std::pair<int, int>> pairs;
  pairs.reserve(edges.size());
  for (const auto& [u, v] : edges) {
    if (u < 0 || u >= n || v < 0 || v >= n)
      throw OutOfRangeError("from_edge_list: edge (" + std::to_string(u) + ", " +
                            std::to_string(v) + ") outside [0, " + std::to_string(n) + ")");
    if (u == v) continue;  // self-loops dropped
    pairs.emplace_back(std::min(u, v), std::max(u, v));
  }
  std::sort(pairs.begin(), pairs.end());
  pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());

  Graph g;
  g.n = n;
  g.m = static_cast<long long>(pairs.size());
  g.degrees.assign(static_cast<size_t>(n), 0);
  for (const auto& [u, v] : pairs) {
    ++g.degrees[static_cast<size_t>(u)];
    ++g.degrees[static_cast<size_t>(v)];
  }
  g.row_ptr.assign(static_cast<size_t>(n) + 1, 0);
  for (int i = 0; i < n; ++i)
    g.row_ptr[static_cast<size_t>(i) + 1] = g.row_ptr[static_cast<size_t>(i)] + g.degrees[static_cast<size_t>(i)];
  g.col_idx.assign(static_cast<size_t>(2 * g.m), 0);
  std::vector<int> cursor(g.row_ptr.begin(), g.row_ptr.end() - 1);
  for (const auto& [u, v] : pairs) {
    g.col_idx[static_cast<size_t>(cursor[static_cast<size_t>(u)]++)] = v;
    g.col_idx[static_cast<size_t>(cursor[static_cast<size_t>(v)]++)] = u;
  }
  // Each row is already sorted: scanning pairs in (min,max) order appends to
  // row i first all smaller endpoints (ascending), then all larger ones.
  return g;
}

NormalizedAdjacency normalized_adjacency(const Graph& g) {
  NormalizedAdjacency s;
  s.g = &g;
  s.inv_sqrt_deg.resize(g.n);
  for (int i = 0; i < g.n; ++i)
    s.inv_sqrt_deg[i] = 1.0 / std::sqrt(static_cast<double>(g.degrees[static_cast<size_t>(i)]) + 1.0);
  return s;
}

Mat apply_operator(const NormalizedAdjacency& s, const Mat& x) {
  const Graph& g = *s.g;
  if (x.rows() != g.n)
    throw ShapeError("apply_operator: matrix has " + std::to_string(x.rows()) +
                     " rows, graph has " + std::to_string(g.n) + " nodes");
  Mat y(g.n, x.cols());
  for (int i = 0; i < g.n; ++i) {
    // Self-loop term plus neighbor sum, then the row scaling.
    Eigen::RowVectorXd acc = s.inv_sqrt_deg[i] * x.row(i);
    for (int j : g.neighbors(i)) acc += s.inv_sqrt_deg[j] * x.row(j);
    y.row(i) = s.inv_sqrt_deg[i] * acc;
  }
  return y;
}

std::pair<double, double> modularity_forms(const Graph& g, const Mat& c) {
  if (g.m == 0) throw DegenerateGraphError("modularity_forms: graph has no edges");
  if (c.rows() != g.n)
    throw ShapeError("modularity_forms: assignment has " + std::to_string(c.rows()) +
                     " rows, graph has " + std::to_string(g.n) + " nodes");
  const int k = static_cast<int>(c.cols());
  const double two_m = 2.0 * static_cast<double>(g.m);

  // Tr(C^T A C) = sum_{(i,j) in E} <C_i, C_j> over both edge orientations.
  double trace_a = 0.0;
  for (int i = 0; i < g.n; ++i)
    for (int j : g.neighbors(i)) trace_a += c.row(i).dot(c.row(j));

  // ||v^T C||^2 with v the degree vector.
  Eigen::RowVectorXd vc = Eigen::RowVectorXd::Zero(k);
  for (int i = 0; i < g.n; ++i)
    vc += static_cast<double>(g.degrees[static_cast<size_t>(i)]) * c.row(i);

  double trace_term = trace_a - vc.squaredNorm() / two_m;
  double colsum_norm = c.colwise().sum().norm();
  return {trace_term, colsum_norm};
}

}  // namespace gnnseed
