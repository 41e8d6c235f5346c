#pragma once

#include <span>
#include <utility>
#include <vector>

#include "gnnseed/types.hpp"

namespace gnnseed {

// Simple undirected graph in CSR form. Each undirected edge {i,j} is stored
// in both rows; col_idx is sorted within a row; no self-loops, no duplicates.
struct Graph {
  int n = 0;
  std::vector<int> row_ptr;  // size n+1
  std::vector<int> col_idx;  // size 2m
  std::vector<int> degrees;  // degrees[i] == row_ptr[i+1] - row_ptr[i]
  long long m = 0;           // undirected edge count

  std::span<const int> neighbors(int i) const {
    return {col_idx.data() + row_ptr[static_cast<size_t>(i)],
            col_idx.data() + row_ptr[static_cast<size_t>(i) + 1]};
  }
};

// Builds the simple graph: drops self-loops, deduplicates (both orientations),
// symmetrizes. Throws OutOfRangeError if an endpoint is outside [0, n).
Graph from_edge_list(const std::vector<std::pair<int, int>>& edges, int n);

// S = D~^{-1/2} (A + I) D~^{-1/2} as a linear operator; the graph itself is
// referenced, only the per-node scalings are stored. The referenced graph
// must outlive the operator (both are immutable after construction).
struct NormalizedAdjacency {
  const Graph* g = nullptr;
  Vec inv_sqrt_deg;  // (degrees[i] + 1)^{-1/2}
};

NormalizedAdjacency normalized_adjacency(const Graph& g);

// Dense product S * x in O((m + n) * d). Throws ShapeError on a row mismatch.
Mat apply_operator(const NormalizedAdjacency& s, const Mat& x);

// For B = A - v v^T / 2m: returns (Tr(C^T B C), ||colsum(C)||_2) without ever
// materializing B. Throws DegenerateGraphError when m = 0.
std::pair<double, double> modularity_forms(const Graph& g, const Mat& c);

}  // namespace gnnseed
