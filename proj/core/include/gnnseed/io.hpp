#pragma once

#include <string>
#include <utility>
#include <vector>

#include "gnnseed/graph.hpp"
#include "gnnseed/types.hpp"

namespace gnnseed {

// Edge-list text format: one edge per line, two whitespace-separated
// non-negative integers; '#'/'%' lines and blank lines skipped; an optional
// third column (weight) is tolerated and discarded. IDs need not be compact.
std::vector<std::pair<long long, long long>> read_edge_list(const std::string& path);

// Label file: one integer per line (line i = node i), -1 allowed as unknown;
// '#'/'%' and blank lines skipped. Raw values, not yet compacted to 0..K-1.
std::vector<long long> read_labels(const std::string& path);

void write_edge_list(const std::string& path, const Graph& g);
void write_labels(const std::string& path, const LabelVector& y);
void write_matrix_csv(const std::string& path, const Mat& x);

// A loaded dataset with both remap tables retained: node_ids[i] is the raw
// id of node i, label_values[c] the raw label behind class c.
struct Dataset {
  Graph g;
  LabelVector y;
  std::vector<long long> node_ids;
  std::vector<long long> label_values;
};

// Parses both files, remaps node ids to 0..n-1 and labels to 0..K-1 (masked
// -1 preserved), symmetrizes and deduplicates. If every edge endpoint already
// lies in [0, #labels) the identity mapping is kept, so isolated trailing
// nodes are representable; otherwise the distinct endpoint ids are compacted
// in sorted order and their count must equal the label count.
Dataset load_dataset(const std::string& edge_path, const std::string& label_path);

}  // namespace gnnseed
