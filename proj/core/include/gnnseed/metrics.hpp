#pragma once

#include <vector>

#include "gnnseed/types.hpp"

namespace gnnseed {

// Adjusted Rand Index between two full labelings (no masked entries).
// Pair counts are exact integers until the single final division; the
// degenerate Max == Expected case returns 1.0 when the partitions are
// identical up to relabeling, else 0.0.
double ari(const std::vector<int>& a, const std::vector<int>& b);
double ari(const LabelVector& a, const LabelVector& b);

// Fraction of nodes in `mask` (a list of node indices) where pred == truth.
double accuracy(const std::vector<int>& pred, const std::vector<int>& truth,
                const std::vector<int>& mask);

}  // namespace gnnseed
