#pragma once

#include <vector>

#include "gnnseed/graph.hpp"
#include "gnnseed/rng.hpp"
#include "gnnseed/types.hpp"

namespace gnnseed {

// The column-normalized one-hot encoder W, kept in factored form: class
// member lists plus the 1/n_k scalars. Masked nodes contribute zero rows.
struct EncoderWeights {
  int n = 0;
  int k = 0;
  std::vector<std::vector<int>> class_members;
  std::vector<double> inv_count;  // 1/n_k, or 0 for an empty class

  Mat dense() const;  // n x k materialization, for tests and oracles
};

// Throws EmptyClassError if any class has zero unmasked members.
EncoderWeights encoder_weights(const LabelVector& y);

// Z = A * W via one sparse traversal, O(m + nK). Uses the raw adjacency,
// no self-loops. Propagates encoder_weights errors.
Mat supervised_gee(const Graph& g, const LabelVector& y);

struct UnsupervisedGeeResult {
  Mat z;
  LabelVector labels;
  int iterations = 0;
  bool converged = false;
  bool empty_class = false;  // a class was empty when the loop stopped
};

// Alternates embedding and k-means from random initial labels until the
// label vector is unchanged (after canonical first-occurrence relabeling) or
// max_iter rounds. Runs `replicates` independent starts seeded from `rng`
// and keeps the one whose final labels score the highest modularity: a
// single random start has a sizable chance of converging immediately to a
// near-balanced degenerate split, so multi-start is required for reliable
// recovery even on trivially separable graphs.
// Throws DegenerateGraphError when m = 0.
UnsupervisedGeeResult unsupervised_gee(const Graph& g, int k, int max_iter, Rng& rng,
                                       int replicates = 10);

// Renames cluster ids by first occurrence: the first node gets 0, the next
// previously-unseen id 1, and so on. Unused ids stay unused.
std::vector<int> canonical_relabel(const std::vector<int>& labels, int k);

}  // namespace gnnseed
