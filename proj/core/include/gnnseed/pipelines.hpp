#pragma once

#include <string>
#include <vector>

#include "gnnseed/gcn.hpp"
#include "gnnseed/graph.hpp"
#include "gnnseed/rng.hpp"
#include "gnnseed/types.hpp"

namespace gnnseed {

enum class Method { GEE, GNN, GG, GGC };

std::string method_name(Method m);
Method parse_method(const std::string& name);

struct SplitMasks {
  std::vector<int> train, val, test;  // disjoint, exhaustive, each sorted
  std::string ratio_tag;
};

// Transductive split: the train+val pool targets round(n * ratio) nodes but
// never goes below what the per-class minimums require (2 train + 1 val per
// class); the validation share is max(round(0.1 * pool), K). Per-class
// minimums are reserved uniformly at random first, then the pool is filled
// uniformly from the rest; everything else is test. Throws
// InfeasibleSplitError if any class has fewer than 3 members or nothing
// would be left for the test set.
SplitMasks split_nodes(const LabelVector& y, double ratio, Rng& rng);

struct MethodResult {
  Method method = Method::GEE;
  LabelVector predictions;
  Mat embedding;       // GEE embedding or the trained network's zhat
  double metric = 0.0; // ARI (cluster) or test accuracy (classify)
  bool has_metric = false;
  double wall_time = 0.0;  // seconds, informational
  uint64_t seed = 0;
  int epochs = 0;      // 0 where not applicable
};

// Clustering composition. GEE: the alternating embedding loop. GNN:
// Xavier-random features trained under the modularity loss. GG: the GEE
// embedding fed as the network's input features. ARI is computed when
// ground-truth labels are supplied.
MethodResult cluster(Method method, const Graph& g, int k, const LabelVector* truth,
                     const TrainConfig& cfg, Rng& rng, int gee_replicates = 10,
                     int gee_max_iter = 30, const EpochCallback& cb = {});

// Classification composition at a fixed split. Labels of validation and test
// nodes are masked before any encoder computation; test labels are never
// read by any method (only by the accuracy metric).
MethodResult classify(Method method, const Graph& g, const LabelVector& y,
                      const SplitMasks& masks, const TrainConfig& cfg, Rng& rng,
                      const EpochCallback& cb = {});

}  // namespace gnnseed
