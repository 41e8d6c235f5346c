#include "gnnseed/cluster_algs.hpp"

#include <Eigen/Cholesky>
#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace gnnseed {

namespace {

// k-means++: first centroid uniform, then proportional to squared distance
// from the nearest chosen centroid. If every candidate distance is zero the
// next centroid falls back to a uniform pick.
Mat seed_plus_plus(const Mat& points, int k, Rng& rng) {
  const int n = static_cast<int>(points.rows());
  Mat centroids(k, points.cols());
  int first = static_cast<int>(rng.uniform_int(static_cast<uint64_t>(n)));
  centroids.row(0) = points.row(first);
  Vec d2 = (points.rowwise() - centroids.row(0)).rowwise().squaredNorm();
  for (int c = 1; c < k; ++c) {
    double total = d2.sum();
    int pick;
    if (total > 0.0) {
      double u = rng.uniform() * total;
      double run = 0.0;
      pick = n - 1;
      for (int i = 0; i < n; ++i) {
        run += d2[i];
        if (u < run) {
          pick = i;
          break;
        }
      }
    } else {
      pick = static_cast<int>(rng.uniform_int(static_cast<uint64_t>(n)));
    }
    centroids.row(c) = points.row(pick);
    d2 = d2.cwiseMin((points.rowwise() - centroids.row(c)).rowwise().squaredNorm());
  }
  return centroids;
}

struct LloydOutcome {
  std::vector<int> assign;
  Mat centroids;
  double inertia;
  bool empty_cluster;
};

LloydOutcome lloyd(const Mat& points, Mat centroids, int max_iter) {
  const int n = static_cast<int>(points.rows());
  const int k = static_cast<int>(centroids.rows());
  std::vector<int> assign(static_cast<size_t>(n), -1);
  std::vector<bool> reseeded(static_cast<size_t>(k), false);
  bool empty_flag = false;

  for (int iter = 0; iter < max_iter; ++iter) {
    bool changed = false;
    for (int i = 0; i < n; ++i) {
      int best = 0;
      double best_d = (points.row(i) - centroids.row(0)).squaredNorm();
      for (int c = 1; c < k; ++c) {
        double d = (points.row(i) - centroids.row(c)).squaredNorm();
        if (d < best_d) {  // strict: ties keep the lowest index
          best_d = d;
          best = c;
        }
      }
      if (assign[static_cast<size_t>(i)] != best) {
        assign[static_cast<size_t>(i)] = best;
        changed = true;
      }
    }
    if (!changed) break;

    Mat sums = Mat::Zero(k, points.cols());
    std::vector<int> counts(static_cast<size_t>(k), 0);
    for (int i = 0; i < n; ++i) {
      sums.row(assign[static_cast<size_t>(i)]) += points.row(i);
      ++counts[static_cast<size_t>(assign[static_cast<size_t>(i)])];
    }
    for (int c = 0; c < k; ++c) {
      if (counts[static_cast<size_t>(c)] > 0) {
        centroids.row(c) = sums.row(c) / counts[static_cast<size_t>(c)];
      } else if (!reseeded[static_cast<size_t>(c)]) {
        // Re-seed once from the point farthest from its own centroid.
        int far = 0;
        double far_d = -1.0;
        for (int i = 0; i < n; ++i) {
          double d = (points.row(i) - centroids.row(assign[static_cast<size_t>(i)])).squaredNorm();
          if (d > far_d) {
            far_d = d;
            far = i;
          }
        }
        centroids.row(c) = points.row(far);
        reseeded[static_cast<size_t>(c)] = true;
      } else {
        empty_flag = true;  // stays where it was, allowed to remain empty
      }
    }
  }

  double inertia = 0.0;
  for (int i = 0; i < n; ++i)
    inertia += (points.row(i) - centroids.row(assign[static_cast<size_t>(i)])).squaredNorm();
  // A cluster empty in the final assignment counts as empty regardless of
  // whether the loop broke before noticing.
  std::vector<int> counts(static_cast<size_t>(k), 0);
  for (int a : assign) ++counts[static_cast<size_t>(a)];
  for (int c = 0; c < k; ++c)
    if (counts[static_cast<size_t>(c)] == 0 && reseeded[static_cast<size_t>(c)]) empty_flag = true;
  return {std::move(assign), std::move(centroids), inertia, empty_flag};
}

}  // namespace

KMeansResult kmeans(const Mat& points, int k, int restarts, int max_iter, Rng& rng) {
  const int n = static_cast<int>(points.rows());
  if (k < 1) throw ConfigError("kmeans: k must be >= 1");
  if (n < k)
    throw InsufficientPointsError("kmeans: " + std::to_string(n) + " points for k = " +
                                  std::to_string(k));
  if (restarts < 1 || max_iter < 1) throw ConfigError("kmeans: restarts and max_iter must be >= 1");

  LloydOutcome best{};
  bool have = false;
  for (int r = 0; r < restarts; ++r) {
    LloydOutcome out = lloyd(points, seed_plus_plus(points, k, rng), max_iter);
    if (!have || out.inertia < best.inertia) {
      best = std::move(out);
      have = true;
    }
  }
  KMeansResult res;
  res.labels = LabelVector(std::move(best.assign), k);
  res.centroids = std::move(best.centroids);
  res.inertia = best.inertia;
  res.empty_cluster = best.empty_cluster;
  return res;
}

LdaModel lda_fit(const Mat& x, const LabelVector& y, double shrinkage) {
  const int n = static_cast<int>(x.rows());
  const int d = static_cast<int>(x.cols());
  if (n == 0) throw Error("lda_fit: empty input");
  if (y.n() != n)
    throw SizeMismatchError("lda_fit: " + std::to_string(n) + " rows vs " +
                            std::to_string(y.n()) + " labels");
  if (!(shrinkage >= 0.0 && shrinkage <= 1.0)) throw ConfigError("lda_fit: shrinkage outside [0,1]");

  std::vector<int> class_ids;
  std::vector<int> count;
  std::vector<int> slot(static_cast<size_t>(y.k), -1);
  for (int i = 0; i < n; ++i) {
    int c = y.values[static_cast<size_t>(i)];
    if (c < 0) throw OutOfRangeError("lda_fit: masked label at row " + std::to_string(i));
    if (c >= y.k) throw OutOfRangeError("lda_fit: label " + std::to_string(c) + " >= k");
    if (slot[static_cast<size_t>(c)] < 0) {
      slot[static_cast<size_t>(c)] = static_cast<int>(class_ids.size());
      class_ids.push_back(c);
      count.push_back(0);
    }
    ++count[static_cast<size_t>(slot[static_cast<size_t>(c)])];
  }
  // Keep rows ordered by class id so the model is independent of row order.
  std::sort(class_ids.begin(), class_ids.end());
  for (size_t s = 0; s < class_ids.size(); ++s) slot[static_cast<size_t>(class_ids[s])] = static_cast<int>(s);
  std::fill(count.begin(), count.end(), 0);
  for (int i = 0; i < n; ++i) ++count[static_cast<size_t>(slot[static_cast<size_t>(y.values[static_cast<size_t>(i)])])];

  const int kp = static_cast<int>(class_ids.size());
  if (kp < 2) throw DegenerateFitError("lda_fit: need at least 2 classes present");

  Mat means = Mat::Zero(kp, d);
  for (int i = 0; i < n; ++i)
    means.row(slot[static_cast<size_t>(y.values[static_cast<size_t>(i)])]) += x.row(i);
  for (int s = 0; s < kp; ++s) means.row(s) /= static_cast<double>(count[static_cast<size_t>(s)]);

  // Pooled within-class scatter with the unbiased N - K divisor.
  Mat sigma = Mat::Zero(d, d);
  for (int i = 0; i < n; ++i) {
    Eigen::RowVectorXd dev = x.row(i) - means.row(slot[static_cast<size_t>(y.values[static_cast<size_t>(i)])]);
    sigma.noalias() += dev.transpose() * dev;
  }
  if (n > kp) sigma /= static_cast<double>(n - kp);

  double scale = sigma.trace() / static_cast<double>(d);
  if (!(scale > 1e-12)) scale = 1e-12;  // keeps the shrunk matrix SPD even at zero scatter
  Mat cov = (1.0 - shrinkage) * sigma + shrinkage * scale * Mat::Identity(d, d);

  LdaModel model;
  model.class_means = std::move(means);
  model.pooled_covariance = std::move(cov);
  model.log_priors.resize(kp);
  for (int s = 0; s < kp; ++s)
    model.log_priors[s] = std::log(static_cast<double>(count[static_cast<size_t>(s)]) / static_cast<double>(n));
  model.class_ids = std::move(class_ids);
  model.shrinkage = shrinkage;
  return model;
}

std::vector<int> lda_predict(const LdaModel& model, const Mat& x) {
  const int d = static_cast<int>(model.pooled_covariance.rows());
  if (x.cols() != d)
    throw ShapeError("lda_predict: " + std::to_string(x.cols()) + " columns vs model d = " +
                     std::to_string(d));
  Eigen::LLT<Mat> llt(model.pooled_covariance);
  if (llt.info() != Eigen::Success)
    throw DegenerateFitError("lda_predict: covariance not positive definite");
  const int kp = static_cast<int>(model.class_means.rows());
  // Sigma^{-1} mu_k for all classes at once.
  Mat w = llt.solve(model.class_means.transpose());  // d x kp
  Vec offset(kp);
  for (int s = 0; s < kp; ++s)
    offset[s] = -0.5 * model.class_means.row(s).dot(w.col(s)) + model.log_priors[s];

  std::vector<int> out(static_cast<size_t>(x.rows()));
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    int best = 0;
    double best_score = x.row(i).dot(w.col(0)) + offset[0];
    for (int s = 1; s < kp; ++s) {
      double score = x.row(i).dot(w.col(s)) + offset[s];
      if (score > best_score) {  // strict: ties keep the lowest class id
        best_score = score;
        best = s;
      }
    }
    out[static_cast<size_t>(i)] = model.class_ids[static_cast<size_t>(best)];
  }
  return out;
}

}  // namespace gnnseed
