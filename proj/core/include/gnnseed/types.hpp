#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "gnnseed/error.hpp"

namespace gnnseed {

// Row-major because every hot loop walks node-by-node (row-by-row).
using Mat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vec = Eigen::VectorXd;

// Per-node integer labels in {-1, 0, ..., k-1}; -1 means masked/unknown.
struct LabelVector {
  static constexpr int kMasked = -1;

  std::vector<int> values;
  int k = 0;

  LabelVector() = default;
  LabelVector(std::vector<int> v, int k_) : values(std::move(v)), k(k_) {}

  int n() const { return static_cast<int>(values.size()); }

  bool is_masked(int i) const { return values[static_cast<size_t>(i)] == kMasked; }

  // Throws if any value falls outside {-1, 0, ..., k-1}.
  void validate() const {
    if (k < 0) throw ShapeError("LabelVector: negative class count");
    for (size_t i = 0; i < values.size(); ++i) {
      int v = values[i];
      if (v < kMasked || v >= k)
        throw OutOfRangeError("LabelVector: value " + std::to_string(v) + " at node " +
                              std::to_string(i) + " outside [-1, " + std::to_string(k - 1) + "]");
    }
  }

  // Number of unmasked nodes carrying each class.
  std::vector<int> class_counts() const {
    std::vector<int> counts(static_cast<size_t>(k), 0);
    for (int v : values)
      if (v >= 0) ++counts[static_cast<size_t>(v)];
    return counts;
  }

  bool operator==(const LabelVector& o) const = default;
};

}  // namespace gnnseed
