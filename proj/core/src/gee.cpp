#include "gnnseed/gee.hpp"

#include <algorithm>
#include <string>

#include "gnnseed/cluster_algs.hpp"

namespace gnnseed {

namespace {

// Shared builder; `strict` decides whether an empty class is an error (the
// public contract) or an all-zero column (needed inside the unsupervised
// loop, where k-means may legally return an empty cluster).
EncoderWeights build_weights(const LabelVector& y, bool strict) {
  y.validate();
  EncoderWeights w;
  w.n = y.n();
  w.k = y.k;
  w.class_members.assign(static_cast<size_t>(y.k), {});
  w.inv_count.assign(static_cast<size_t>(y.k), 0.0);
  for (int i = 0; i < y.n(); ++i) {
    int c = y.values[static_cast<size_t>(i)];
    if (c >= 0) w.class_members[static_cast<size_t>(c)].push_back(i);
  }
  for (int c = 0; c < y.k; ++c) {
    size_t nk = w.class_members[static_cast<size_t>(c)].size();
    if (nk == 0) {
      if (strict) throw EmptyClassError("encoder_weights: class " + std::to_string(c) + " has no unmasked nodes");
    } else {
      w.inv_count[static_cast<size_t>(c)] = 1.0 / static_cast<double>(nk);
    }
  }
  return w;
}

Mat gee_embed(const Graph& g, const LabelVector& y, bool strict) {
  EncoderWeights w = build_weights(y, strict);
  Mat z = Mat::Zero(g.n, y.k);
  // Row i of A*W accumulates 1/n_{y_j} into column y_j for every neighbor j.
  for (int i = 0; i < g.n; ++i)
    for (int j : g.neighbors(i)) {
      int c = y.values[static_cast<size_t>(j)];
      if (c >= 0) z(i, c) += w.inv_count[static_cast<size_t>(c)];
    }
  return z;
}

}  // namespace

Mat EncoderWeights::dense() const {
  Mat w = Mat::Zero(n, k);
  for (int c = 0; c < k; ++c)
    for (int i : class_members[static_cast<size_t>(c)]) w(i, c) = inv_count[static_cast<size_t>(c)];
  return w;
}

EncoderWeights encoder_weights(const LabelVector& y) { return build_weights(y, true); }

Mat supervised_gee(const Graph& g, const LabelVector& y) {
  if (y.n() != g.n)
    throw SizeMismatchError("supervised_gee: " + std::to_string(y.n()) + " labels vs " +
                            std::to_string(g.n) + " nodes");
  return gee_embed(g, y, true);
}

std::vector<int> canonical_relabel(const std::vector<int>& labels, int k) {
  std::vector<int> rename(static_cast<size_t>(k), -1);
  std::vector<int> out(labels.size());
  int next = 0;
  for (size_t i = 0; i < labels.size(); ++i) {
    int c = labels[i];
    if (rename[static_cast<size_t>(c)] < 0) rename[static_cast<size_t>(c)] = next++;
    out[i] = rename[static_cast<size_t>(c)];
  }
  return out;
}

namespace {

struct SingleRun {
  UnsupervisedGeeResult result;
  double modularity;  // of the final labels, used to pick among replicates
};

SingleRun run_once(const Graph& g, int k, int max_iter, Rng& rng) {
  const int n = g.n;
  // Uniform i.i.d. initial labels, resampled until every class is hit; a
  // deterministic round-robin fallback guards the pathological tail.
  std::vector<int> labels(static_cast<size_t>(n));
  bool ok = false;
  for (int attempt = 0; attempt < 10000 && !ok; ++attempt) {
    std::vector<bool> seen(static_cast<size_t>(k), false);
    for (int i = 0; i < n; ++i) {
      labels[static_cast<size_t>(i)] = static_cast<int>(rng.uniform_int(static_cast<uint64_t>(k)));
      seen[static_cast<size_t>(labels[static_cast<size_t>(i)])] = true;
    }
    ok = std::all_of(seen.begin(), seen.end(), [](bool b) { return b; });
  }
  if (!ok)
    for (int i = 0; i < n; ++i) labels[static_cast<size_t>(i)] = i % k;

  labels = canonical_relabel(labels, k);
  UnsupervisedGeeResult res;
  Mat z;
  for (int iter = 1; iter <= max_iter; ++iter) {
    LabelVector y(labels, k);
    z = gee_embed(g, y, false);
    KMeansResult km = kmeans(z, k, /*restarts=*/k, /*max_iter=*/100, rng);
    std::vector<int> next = canonical_relabel(km.labels.values, k);
    res.iterations = iter;
    if (next == labels) {
      res.converged = true;
      labels = std::move(next);
      break;
    }
    labels = std::move(next);
  }
  // Report (don't erase) any class that ended empty.
  std::vector<int> counts(static_cast<size_t>(k), 0);
  for (int c : labels) ++counts[static_cast<size_t>(c)];
  res.empty_class = std::any_of(counts.begin(), counts.end(), [](int c) { return c == 0; });

  LabelVector y(labels, k);
  res.z = gee_embed(g, y, false);
  res.labels = std::move(y);

  // Newman modularity of the final hard labels: Tr(C^T B C) / 2m with C the
  // exact one-hot indicator.
  Mat c = Mat::Zero(n, k);
  for (int i = 0; i < n; ++i) c(i, res.labels.values[static_cast<size_t>(i)]) = 1.0;
  auto [trace_term, colsum] = modularity_forms(g, c);
  (void)colsum;
  return {std::move(res), trace_term / (2.0 * static_cast<double>(g.m))};
}

}  // namespace

UnsupervisedGeeResult unsupervised_gee(const Graph& g, int k, int max_iter, Rng& rng,
                                       int replicates) {
  if (g.m == 0) throw DegenerateGraphError("unsupervised_gee: graph has no edges");
  if (k < 2) throw ConfigError("unsupervised_gee: k must be >= 2");
  if (max_iter < 1) throw ConfigError("unsupervised_gee: max_iter must be >= 1");
  if (g.n < k) throw InsufficientPointsError("unsupervised_gee: fewer nodes than clusters");
  if (replicates < 1) throw ConfigError("unsupervised_gee: replicates must be >= 1");

  SingleRun best{};
  bool have = false;
  for (int r = 0; r < replicates; ++r) {
    Rng child(rng.next_u64());
    SingleRun run = run_once(g, k, max_iter, child);
    if (!have || run.modularity > best.modularity) {
      best = std::move(run);
      have = true;
    }
  }
  return std::move(best.result);
}

}  // namespace gnnseed
