#pragma once

#include <vector>

#include "gnnseed/rng.hpp"
#include "gnnseed/types.hpp"

namespace gnnseed {

struct KMeansResult {
  LabelVector labels;
  Mat centroids;   // K x d
  double inertia;  // within-cluster sum of squared distances
  bool empty_cluster = false;  // a cluster stayed empty after its one re-seed
};

// Best-of-`restarts` Lloyd's algorithm with k-means++ seeding. Assignment
// ties go to the lowest centroid index. An empty cluster is re-seeded from
// the farthest point once; if it empties again it stays empty and is flagged.
KMeansResult kmeans(const Mat& points, int k, int restarts, int max_iter, Rng& rng);

struct LdaModel {
  Mat class_means;        // one row per *present* class
  Mat pooled_covariance;  // d x d, after shrinkage
  Vec log_priors;         // aligned with class_means rows
  std::vector<int> class_ids;  // original label of each row
  double shrinkage;
};

// Pooled-covariance linear discriminant fit on unmasked rows. The covariance
// is regularized as (1-lambda) * Sigma + lambda * scale * I where scale is
// tr(Sigma)/d floored away from zero, so the model is always well-posed.
LdaModel lda_fit(const Mat& x, const LabelVector& y, double shrinkage = 1e-3);

// Argmax over delta_k(x) = x^T Sigma^{-1} mu_k - mu_k^T Sigma^{-1} mu_k / 2
// + log pi_k; ties go to the lowest class id.
std::vector<int> lda_predict(const LdaModel& model, const Mat& x);

}  // namespace gnnseed
