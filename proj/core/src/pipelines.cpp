#include "gnnseed/pipelines.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <string>

#include "gnnseed/cluster_algs.hpp"
#include "gnnseed/gee.hpp"
#include "gnnseed/metrics.hpp"

namespace gnnseed {

std::string method_name(Method m) {
  switch (m) {
    case Method::GEE: return "gee";
    case Method::GNN: return "gnn";
    case Method::GG: return "gg";
    case Method::GGC: return "ggc";
  }
  throw ConfigError("method_name: unknown method");
}

Method parse_method(const std::string& name) {
  std::string s;
  for (char c : name) s.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  if (s == "gee") return Method::GEE;
  if (s == "gnn") return Method::GNN;
  if (s == "gg") return Method::GG;
  if (s == "ggc" || s == "gg-c") return Method::GGC;
  throw ConfigError("unknown method '" + name + "' (expected gee, gnn, gg, or ggc)");
}

SplitMasks split_nodes(const LabelVector& y, double ratio, Rng& rng) {
  y.validate();
  const int n = y.n();
  const int k = y.k;
  if (k < 1) throw InfeasibleSplitError("split_nodes: no classes");
  if (!(ratio > 0.0 && ratio < 1.0)) throw ConfigError("split_nodes: ratio must be in (0,1)");

  std::vector<std::vector<int>> members(static_cast<size_t>(k));
  for (int i = 0; i < n; ++i) {
    int c = y.values[static_cast<size_t>(i)];
    if (c < 0) throw InfeasibleSplitError("split_nodes: masked label at node " + std::to_string(i));
    members[static_cast<size_t>(c)].push_back(i);
  }
  for (int c = 0; c < k; ++c)
    if (members[static_cast<size_t>(c)].size() < 3)
      throw InfeasibleSplitError("split_nodes: class " + std::to_string(c) + " has only " +
                                 std::to_string(members[static_cast<size_t>(c)].size()) +
                                 " members (minimum 3: 2 train + 1 val)");

  // Pool sizing: the per-class minimums (2 train + 1 val each) override the
  // nominal round(n * ratio); within the pool, validation gets 10% but at
  // least one node per class.
  long long pool = std::llround(static_cast<double>(n) * ratio);
  pool = std::max(pool, static_cast<long long>(3 * k));
  if (pool >= n)
    throw InfeasibleSplitError("split_nodes: pool of " + std::to_string(pool) +
                               " leaves no test nodes (n = " + std::to_string(n) + ")");
  long long val_target = std::max(std::llround(0.1 * static_cast<double>(pool)),
                                  static_cast<long long>(k));
  long long train_target = pool - val_target;

  SplitMasks out;
  std::vector<char> taken(static_cast<size_t>(n), 0);
  // Reserve the minimums per class, uniformly at random within the class.
  for (int c = 0; c < k; ++c) {
    auto& m = members[static_cast<size_t>(c)];
    rng.shuffle(m);
    out.train.push_back(m[0]);
    out.train.push_back(m[1]);
    out.val.push_back(m[2]);
    taken[static_cast<size_t>(m[0])] = taken[static_cast<size_t>(m[1])] = taken[static_cast<size_t>(m[2])] = 1;
  }
  // Fill the remaining pool slots uniformly from everything left.
  std::vector<int> rest;
  rest.reserve(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i)
    if (!taken[static_cast<size_t>(i)]) rest.push_back(i);
  rng.shuffle(rest);
  size_t cursor = 0;
  for (long long s = 2 * k; s < train_target; ++s) out.train.push_back(rest[cursor++]);
  for (long long s = k; s < val_target; ++s) out.val.push_back(rest[cursor++]);
  for (; cursor < rest.size(); ++cursor) out.test.push_back(rest[cursor]);

  std::sort(out.train.begin(), out.train.end());
  std::sort(out.val.begin(), out.val.end());
  std::sort(out.test.begin(), out.test.end());
  double pct = ratio * 100.0;
  char tag[32];
  std::snprintf(tag, sizeof tag, "%g%%", pct);
  out.ratio_tag = tag;
  return out;
}

namespace {

LabelVector mask_labels(const LabelVector& y, const std::vector<int>& hide_a,
                        const std::vector<int>& hide_b) {
  LabelVector out = y;
  for (int i : hide_a) out.values[static_cast<size_t>(i)] = LabelVector::kMasked;
  for (int i : hide_b) out.values[static_cast<size_t>(i)] = LabelVector::kMasked;
  return out;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

MethodResult cluster(Method method, const Graph& g, int k, const LabelVector* truth,
                     const TrainConfig& cfg, Rng& rng, int gee_replicates, int gee_max_iter,
                     const EpochCallback& cb) {
  if (method == Method::GGC) throw ConfigError("cluster: gg-c is a classification-only method");
  auto t0 = std::chrono::steady_clock::now();
  MethodResult res;
  res.method = method;

  switch (method) {
    case Method::GEE: {
      UnsupervisedGeeResult u = unsupervised_gee(g, k, gee_max_iter, rng, gee_replicates);
      res.predictions = std::move(u.labels);
      res.embedding = std::move(u.z);
      res.epochs = u.iterations;
      break;
    }
    case Method::GNN: {
      Mat z0 = xavier_init(g.n, k, rng);
      UnsupTrainResult t = train_unsupervised(g, z0, cfg, rng, cb);
      res.predictions = std::move(t.labels);
      res.embedding = std::move(t.zhat);
      res.epochs = t.epochs;
      break;
    }
    case Method::GG: {
      UnsupervisedGeeResult u = unsupervised_gee(g, k, gee_max_iter, rng, gee_replicates);
      UnsupTrainResult t = train_unsupervised(g, u.z, cfg, rng, cb);
      res.predictions = std::move(t.labels);
      res.embedding = std::move(t.zhat);
      res.epochs = t.epochs;
      break;
    }
    default: break;
  }

  if (truth) {
    res.metric = ari(res.predictions.values, truth->values);
    res.has_metric = true;
  }
  res.wall_time = seconds_since(t0);
  return res;
}

MethodResult classify(Method method, const Graph& g, const LabelVector& y,
                      const SplitMasks& masks, const TrainConfig& cfg, Rng& rng,
                      const EpochCallback& cb) {
  y.validate();
  auto t0 = std::chrono::steady_clock::now();
  MethodResult res;
  res.method = method;

  // The encoder sees train labels only; training/validation see train and
  // val labels. Test labels exist solely for the final metric.
  LabelVector y_encoder = mask_labels(y, masks.val, masks.test);
  LabelVector y_trainval = mask_labels(y, masks.test, {});
  const int k = y.k;

  auto lda_on = [&](const Mat& features) {
    Mat train_rows(masks.train.size(), features.cols());
    std::vector<int> train_labels(masks.train.size());
    for (size_t r = 0; r < masks.train.size(); ++r) {
      train_rows.row(static_cast<Eigen::Index>(r)) = features.row(masks.train[r]);
      train_labels[r] = y_trainval.values[static_cast<size_t>(masks.train[r])];
    }
    LdaModel model = lda_fit(train_rows, LabelVector(std::move(train_labels), k));
    return lda_predict(model, features);
  };

  switch (method) {
    case Method::GEE: {
      Mat z = supervised_gee(g, y_encoder);
      res.predictions = LabelVector(lda_on(z), k);
      res.embedding = std::move(z);
      break;
    }
    case Method::GNN: {
      Mat z0 = xavier_init(g.n, k, rng);
      SupTrainResult t = train_supervised(g, z0, y_trainval, masks.train, masks.val, cfg, rng, cb);
      res.predictions = std::move(t.pred);
      res.embedding = std::move(t.zhat);
      res.epochs = t.epochs;
      break;
    }
    case Method::GG: {
      Mat z0 = supervised_gee(g, y_encoder);
      SupTrainResult t = train_supervised(g, z0, y_trainval, masks.train, masks.val, cfg, rng, cb);
      res.predictions = std::move(t.pred);
      res.embedding = std::move(t.zhat);
      res.epochs = t.epochs;
      break;
    }
    case Method::GGC: {
      Mat z_gee = supervised_gee(g, y_encoder);
      SupTrainResult t = train_supervised(g, z_gee, y_trainval, masks.train, masks.val, cfg, rng, cb);
      // Concatenated features: the network's refined embedding first, the
      // raw encoder embedding second.
      Mat features(g.n, 2 * k);
      features.leftCols(k) = t.zhat;
      features.rightCols(k) = z_gee;
      res.predictions = LabelVector(lda_on(features), k);
      res.embedding = std::move(features);
      res.epochs = t.epochs;
      break;
    }
  }

  res.metric = accuracy(res.predictions.values, y.values, masks.test);
  res.has_metric = true;
  res.wall_time = seconds_since(t0);
  return res;
}

}  // namespace gnnseed
