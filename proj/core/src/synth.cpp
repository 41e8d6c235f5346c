#include "gnnseed/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace gnnseed {

void BlockModelConfig::validate() const {
  if (n < 1) throw ConfigError("block model: n must be positive");
  if (k < 1) throw ConfigError("block model: k must be positive");
  if (block_probs.rows() != k || block_probs.cols() != k)
    throw ConfigError("block model: block_probs must be k x k");
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) {
      double p = block_probs(i, j);
      if (!(p >= 0.0 && p <= 1.0)) throw ConfigError("block model: block_probs entries must be in [0,1]");
      if (block_probs(i, j) != block_probs(j, i))
        throw ConfigError("block model: block_probs must be symmetric");
    }
  if (static_cast<int>(community_proportions.size()) != k)
    throw ConfigError("block model: need k community proportions");
  for (double w : community_proportions)
    if (!(w > 0.0)) throw ConfigError("block model: proportions must be positive");
  if (degree_correction == DegreeCorrection::Beta && (beta_a <= 0.0 || beta_b <= 0.0))
    throw ConfigError("block model: beta parameters must be positive");
}

std::vector<int> apportion_sizes(const std::vector<double>& proportions, int n) {
  const int k = static_cast<int>(proportions.size());
  if (k == 0) throw ConfigError("apportion_sizes: no proportions");
  double total = std::accumulate(proportions.begin(), proportions.end(), 0.0);
  std::vector<int> sizes(static_cast<size_t>(k));
  std::vector<std::pair<double, int>> remainders(static_cast<size_t>(k));
  int assigned = 0;
  for (int i = 0; i < k; ++i) {
    double exact = static_cast<double>(n) * proportions[static_cast<size_t>(i)] / total;
    sizes[static_cast<size_t>(i)] = static_cast<int>(std::floor(exact));
    assigned += sizes[static_cast<size_t>(i)];
    remainders[static_cast<size_t>(i)] = {exact - std::floor(exact), i};
  }
  // Hand out the leftover seats by largest remainder, lower index on ties.
  std::stable_sort(remainders.begin(), remainders.end(),
                   [](const auto& a, const auto& b) { return a.first > b.first; });
  for (int s = 0; s < n - assigned; ++s)
    ++sizes[static_cast<size_t>(remainders[static_cast<size_t>(s)].second)];
  return sizes;
}

namespace {

std::vector<int> block_labels(const std::vector<int>& sizes) {
  std::vector<int> y;
  for (size_t c = 0; c < sizes.size(); ++c)
    y.insert(y.end(), static_cast<size_t>(sizes[c]), static_cast<int>(c));
  return y;
}

// One uniform draw per unordered pair, in fixed (i, j > i) order. theta may
// be null (plain SBM). Shared by both models so the theta == 1 case is
// stream-identical to the SBM.
Graph sample_pairwise(const std::vector<int>& y, const Mat& b, const std::vector<double>* theta,
                      Rng& rng) {
  const int n = static_cast<int>(y.size());
  std::vector<std::pair<int, int>> edges;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      double p = b(y[static_cast<size_t>(i)], y[static_cast<size_t>(j)]);
      if (theta) p *= (*theta)[static_cast<size_t>(i)] * (*theta)[static_cast<size_t>(j)];
      p = std::min(1.0, std::max(0.0, p));
      if (rng.uniform() < p) edges.emplace_back(i, j);
    }
  }
  return from_edge_list(edges, n);
}

}  // namespace

std::pair<Graph, LabelVector> sample_sbm(const BlockModelConfig& cfg, Rng& rng) {
  cfg.validate();
  if (cfg.degree_correction != DegreeCorrection::None)
    throw ConfigError("sample_sbm: config requests degree correction");
  auto sizes = apportion_sizes(cfg.community_proportions, cfg.n);
  auto y = block_labels(sizes);
  Graph g = sample_pairwise(y, cfg.block_probs, nullptr, rng);
  return {std::move(g), LabelVector(std::move(y), cfg.k)};
}

DcsbmSample sample_dcsbm_with_theta(const BlockModelConfig& cfg, std::vector<double> theta,
                                    Rng& rng) {
  cfg.validate();
  if (static_cast<int>(theta.size()) != cfg.n)
    throw ShapeError("sample_dcsbm: theta length " + std::to_string(theta.size()) +
                     " vs n = " + std::to_string(cfg.n));
  for (double t : theta)
    if (!(t >= 0.0 && t <= 1.0)) throw ConfigError("sample_dcsbm: theta entries must be in [0,1]");
  auto sizes = apportion_sizes(cfg.community_proportions, cfg.n);
  auto y = block_labels(sizes);
  Graph g = sample_pairwise(y, cfg.block_probs, &theta, rng);
  return {std::move(g), LabelVector(std::move(y), cfg.k), std::move(theta)};
}

DcsbmSample sample_dcsbm(const BlockModelConfig& cfg, Rng& rng) {
  cfg.validate();
  if (cfg.degree_correction != DegreeCorrection::Beta)
    throw ConfigError("sample_dcsbm: config lacks a degree-correction law");
  std::vector<double> theta(static_cast<size_t>(cfg.n));
  for (double& t : theta) t = rng.beta(cfg.beta_a, cfg.beta_b);
  return sample_dcsbm_with_theta(cfg, std::move(theta), rng);
}

Mat planted_block_probs(int k, double intra, double r) {
  Mat b = Mat::Constant(k, k, r);
  for (int i = 0; i < k; ++i) b(i, i) = intra;
  return b;
}

}  // namespace gnnseed
