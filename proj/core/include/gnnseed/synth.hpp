#pragma once

#include <cstdint>
#include <vector>

#include "gnnseed/graph.hpp"
#include "gnnseed/rng.hpp"
#include "gnnseed/types.hpp"

namespace gnnseed {

enum class DegreeCorrection { None, Beta };

struct BlockModelConfig {
  int n = 0;
  int k = 0;
  Mat block_probs;                            // K x K, symmetric, entries in [0,1]
  std::vector<double> community_proportions;  // positive weights, any scale
  DegreeCorrection degree_correction = DegreeCorrection::None;
  double beta_a = 1.0;
  double beta_b = 4.0;
  uint64_t seed = 0;

  void validate() const;
};

struct SweepConfig {
  double intra_prob = 0.3;
  std::vector<double> r_grid;
  int trials_per_point = 1;
  BlockModelConfig base;
};

// Integer community sizes from positive proportions by largest-remainder
// apportionment; remainder ties go to the lower class index. Sizes sum to n.
std::vector<int> apportion_sizes(const std::vector<double>& proportions, int n);

// Nodes are labeled deterministically by block: the first sizes[0] nodes are
// class 0, and so on. Each unordered pair is sampled with exactly one uniform
// draw, so a DC-SBM with theta forced to all-ones consumes the identical
// stream and reproduces the SBM bit for bit.
std::pair<Graph, LabelVector> sample_sbm(const BlockModelConfig& cfg, Rng& rng);

struct DcsbmSample {
  Graph g;
  LabelVector y;
  std::vector<double> theta;
};

// theta_i drawn i.i.d. from Beta(a, b), then every pair {i,j} is Bernoulli
// with probability clamp(theta_i * theta_j * B(y_i, y_j)).
DcsbmSample sample_dcsbm(const BlockModelConfig& cfg, Rng& rng);

// Test hook: same sampler with the theta vector supplied by the caller
// instead of drawn from the rng.
DcsbmSample sample_dcsbm_with_theta(const BlockModelConfig& cfg, std::vector<double> theta,
                                    Rng& rng);

// Convenience for the planted-partition sweep point: K x K matrix with
// `intra` on the diagonal and `r` off it.
Mat planted_block_probs(int k, double intra, double r);

}  // namespace gnnseed
