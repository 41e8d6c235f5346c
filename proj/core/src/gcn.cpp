#include "gnnseed/gcn.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "gnnseed/metrics.hpp"

namespace gnnseed {

void TrainConfig::validate() const {
  if (!(learning_rate > 0.0)) throw ConfigError("train config: learning_rate must be positive");
  if (max_epochs < 0) throw ConfigError("train config: max_epochs must be >= 0");
  if (patience < 0) throw ConfigError("train config: patience must be >= 0");
  if (max_epochs > 0 && patience > max_epochs)
    throw ConfigError("train config: patience must not exceed max_epochs");
  if (!(loss_tolerance >= 0.0)) throw ConfigError("train config: loss_tolerance must be >= 0");
  if (!(dropout >= 0.0 && dropout < 1.0)) throw ConfigError("train config: dropout must be in [0,1)");
  if (!(weight_decay >= 0.0)) throw ConfigError("train config: weight_decay must be >= 0");
}

TrainConfig clustering_train_defaults() { return {}; }

TrainConfig classification_train_defaults() {
  TrainConfig cfg;
  cfg.max_epochs = 2000;
  cfg.patience = 200;
  return cfg;
}

Mat xavier_init(int rows, int cols, Rng& rng) {
  if (rows < 1 || cols < 1) throw ShapeError("xavier_init: dimensions must be positive");
  double b = std::sqrt(6.0 / (static_cast<double>(rows) + static_cast<double>(cols)));
  Mat x(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) x(i, j) = rng.uniform(-b, b);
  return x;
}

namespace {

// Forward pass with an optional inverted-dropout mask on the hidden layer.
// mask entries are 0 or 1/(1-p); nullptr means no dropout.
ForwardTrace forward_impl(const NormalizedAdjacency& s, const Mat& z0, const GcnModel& model,
                          const Mat* mask) {
  const int k = static_cast<int>(z0.cols());
  if (model.w0.rows() != k || model.w0.cols() != k || model.w1.rows() != k || model.w1.cols() != k)
    throw ShapeError("gcn_forward: weight matrices must be k x k with k = z0 columns");
  ForwardTrace t;
  t.a1 = apply_operator(s, z0);
  t.p1.noalias() = t.a1 * model.w0;
  t.z1 = t.p1.cwiseMax(0.0);
  if (mask) t.z1 = t.z1.cwiseProduct(*mask);
  t.a2 = apply_operator(s, t.z1);
  t.p2.noalias() = t.a2 * model.w1;
  t.z2 = t.p2.cwiseMax(0.0);
  t.zhat = z0 + t.z1 + t.z2;
  return t;
}

// Row-wise numerically stable softmax.
Mat softmax_rows(const Mat& z) {
  Mat c(z.rows(), z.cols());
  for (Eigen::Index i = 0; i < z.rows(); ++i) {
    double mx = z.row(i).maxCoeff();
    c.row(i) = (z.row(i).array() - mx).exp();
    c.row(i) /= c.row(i).sum();
  }
  return c;
}

// dL/dzhat from dL/dC for a row-wise softmax: dZ_ik = C_ik (G_ik - G_i . C_i).
Mat softmax_backward(const Mat& c, const Mat& g) {
  Mat dz(c.rows(), c.cols());
  for (Eigen::Index i = 0; i < c.rows(); ++i) {
    double dot = g.row(i).dot(c.row(i));
    dz.row(i) = c.row(i).cwiseProduct((g.row(i).array() - dot).matrix());
  }
  return dz;
}

// A * C through the CSR rows.
Mat adj_times(const Graph& g, const Mat& c) {
  Mat out = Mat::Zero(g.n, c.cols());
  for (int i = 0; i < g.n; ++i) {
    auto row = out.row(i);
    for (int j : g.neighbors(i)) row += c.row(j);
  }
  return out;
}

}  // namespace

std::pair<Mat, ForwardTrace> gcn_forward(const NormalizedAdjacency& s, const Mat& z0,
                                         const GcnModel& model) {
  ForwardTrace t = forward_impl(s, z0, model, nullptr);
  Mat zhat = t.zhat;
  return {std::move(zhat), std::move(t)};
}

GcnModel gcn_backward(const NormalizedAdjacency& s, const ForwardTrace& trace,
                      const GcnModel& model, const Mat& grad_zhat) {
  // zhat = z0 + z1 + z2, so grad_zhat flows into both the layer-2 path and
  // the skip path of z1.
  Mat dp2 = grad_zhat.cwiseProduct((trace.p2.array() > 0.0).cast<double>().matrix());
  GcnModel grads;
  grads.w1.noalias() = trace.a2.transpose() * dp2;
  Mat dz1 = grad_zhat + apply_operator(s, dp2 * model.w1.transpose());  // S is symmetric
  Mat dp1 = dz1.cwiseProduct((trace.p1.array() > 0.0).cast<double>().matrix());
  grads.w0.noalias() = trace.a1.transpose() * dp1;
  return grads;
}

std::pair<double, Mat> dmon_loss(const Graph& g, const Mat& zhat) {
  if (g.m == 0) throw DegenerateGraphError("dmon_loss: graph has no edges");
  if (zhat.rows() != g.n) throw ShapeError("dmon_loss: row count does not match the graph");
  const int n = g.n;
  const int k = static_cast<int>(zhat.cols());
  const double two_m = 2.0 * static_cast<double>(g.m);
  const double sqrt_k = std::sqrt(static_cast<double>(k));

  Mat c = softmax_rows(zhat);
  auto [trace_term, colsum_norm] = modularity_forms(g, c);
  double loss = -trace_term / two_m + (sqrt_k / n) * colsum_norm - 1.0;

  // d(trace_term)/dC = 2AC - v (v^T C) / m; collapse term adds
  // (sqrt(K)/n) * u_k / ||u|| to every row, u = colsum(C).
  Mat ac = adj_times(g, c);
  Eigen::RowVectorXd vc = Eigen::RowVectorXd::Zero(k);
  for (int i = 0; i < n; ++i)
    vc += static_cast<double>(g.degrees[static_cast<size_t>(i)]) * c.row(i);
  Eigen::RowVectorXd u = c.colwise().sum();
  Eigen::RowVectorXd collapse_row = (sqrt_k / n) * (u / colsum_norm);

  Mat grad_c(n, k);
  for (int i = 0; i < n; ++i) {
    grad_c.row(i) = -(2.0 * ac.row(i) -
                      static_cast<double>(g.degrees[static_cast<size_t>(i)]) * vc / static_cast<double>(g.m)) /
                        two_m +
                    collapse_row;
  }
  return {loss, softmax_backward(c, grad_c)};
}

std::pair<double, Mat> cross_entropy_loss(const Mat& zhat, const LabelVector& y,
                                          const std::vector<int>& train_mask) {
  if (train_mask.empty()) throw EmptyMaskError("cross_entropy_loss: empty train mask");
  if (zhat.rows() != y.n()) throw ShapeError("cross_entropy_loss: rows vs labels mismatch");
  const double inv = 1.0 / static_cast<double>(train_mask.size());
  double loss = 0.0;
  Mat grad = Mat::Zero(zhat.rows(), zhat.cols());
  for (int i : train_mask) {
    if (i < 0 || i >= y.n()) throw OutOfRangeError("cross_entropy_loss: mask index out of range");
    int yi = y.values[static_cast<size_t>(i)];
    if (yi < 0) throw EmptyMaskError("cross_entropy_loss: masked label on train node " + std::to_string(i));
    double mx = zhat.row(i).maxCoeff();
    double lse = mx + std::log((zhat.row(i).array() - mx).exp().sum());
    loss += (lse - zhat(i, yi)) * inv;
    Eigen::RowVectorXd p = (zhat.row(i).array() - lse).exp();
    grad.row(i) = p * inv;
    grad(i, yi) -= inv;
  }
  return {loss, std::move(grad)};
}

AdamState adam_init(int k) {
  AdamState s;
  s.m0 = Mat::Zero(k, k);
  s.v0 = Mat::Zero(k, k);
  s.m1 = Mat::Zero(k, k);
  s.v1 = Mat::Zero(k, k);
  return s;
}

namespace {

void adam_update_one(Mat& w, const Mat& g, Mat& m, Mat& v, int t, const TrainConfig& cfg) {
  m = cfg.adam_beta1 * m + (1.0 - cfg.adam_beta1) * g;
  v = cfg.adam_beta2 * v + (1.0 - cfg.adam_beta2) * g.cwiseProduct(g);
  double bc1 = 1.0 - std::pow(cfg.adam_beta1, t);
  double bc2 = 1.0 - std::pow(cfg.adam_beta2, t);
  Mat mhat = m / bc1;
  Mat vhat = v / bc2;
  w -= cfg.learning_rate *
       mhat.cwiseQuotient(vhat.cwiseSqrt() + Mat::Constant(vhat.rows(), vhat.cols(), cfg.adam_epsilon));
}

}  // namespace

void adam_step(GcnModel& model, const GcnModel& grads, AdamState& state, int t,
               const TrainConfig& cfg) {
  if (t < 1) throw ConfigError("adam_step: t must be >= 1");
  adam_update_one(model.w0, grads.w0, state.m0, state.v0, t, cfg);
  adam_update_one(model.w1, grads.w1, state.m1, state.v1, t, cfg);
}

std::vector<int> argmax_rows(const Mat& x) {
  std::vector<int> out(static_cast<size_t>(x.rows()));
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    int best = 0;
    for (Eigen::Index j = 1; j < x.cols(); ++j)
      if (x(i, j) > x(i, best)) best = static_cast<int>(j);  // strict: ties keep lowest
    out[static_cast<size_t>(i)] = best;
  }
  return out;
}

namespace {

Mat draw_dropout_mask(int n, int k, double p, Rng& rng) {
  Mat mask(n, k);
  double keep = 1.0 - p;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < k; ++j) mask(i, j) = rng.uniform() < keep ? 1.0 / keep : 0.0;
  return mask;
}

void add_weight_decay(GcnModel& grads, const GcnModel& model, double wd) {
  if (wd > 0.0) {
    grads.w0 += wd * model.w0;
    grads.w1 += wd * model.w1;
  }
}

}  // namespace

UnsupTrainResult train_unsupervised(const Graph& g, const Mat& z0, const TrainConfig& cfg,
                                    Rng& rng, const EpochCallback& cb) {
  cfg.validate();
  if (g.m == 0) throw DegenerateGraphError("train_unsupervised: graph has no edges");
  if (z0.rows() != g.n) throw ShapeError("train_unsupervised: z0 rows vs graph nodes");
  const int k = static_cast<int>(z0.cols());
  if (cfg.max_epochs == 0)
    return {LabelVector(argmax_rows(z0), k), z0, 0};

  NormalizedAdjacency s = normalized_adjacency(g);
  GcnModel model{xavier_init(k, k, rng), xavier_init(k, k, rng)};
  AdamState state = adam_init(k);

  GcnModel best_model = model;
  double best_loss = std::numeric_limits<double>::infinity();
  int epochs_without_improvement = 0;
  int epochs = 0;

  for (int t = 1; t <= cfg.max_epochs; ++t) {
    epochs = t;
    Mat mask;
    const Mat* mask_ptr = nullptr;
    if (cfg.dropout > 0.0) {
      mask = draw_dropout_mask(g.n, k, cfg.dropout, rng);
      mask_ptr = &mask;
    }
    ForwardTrace trace = forward_impl(s, z0, model, mask_ptr);
    auto [loss, grad_zhat] = dmon_loss(g, trace.zhat);
    if (cb) cb(t, loss, std::numeric_limits<double>::quiet_NaN());

    if (loss < best_loss - cfg.loss_tolerance) {
      best_loss = loss;
      best_model = model;
      epochs_without_improvement = 0;
    } else {
      ++epochs_without_improvement;
    }
    if (epochs_without_improvement >= cfg.patience) break;

    GcnModel grads = gcn_backward(s, trace, model, grad_zhat);
    add_weight_decay(grads, model, cfg.weight_decay);
    adam_step(model, grads, state, t, cfg);
  }

  ForwardTrace final_trace = forward_impl(s, z0, best_model, nullptr);
  return {LabelVector(argmax_rows(final_trace.zhat), k), final_trace.zhat, epochs};
}

SupTrainResult train_supervised(const Graph& g, const Mat& z0, const LabelVector& y,
                                const std::vector<int>& train_mask,
                                const std::vector<int>& val_mask, const TrainConfig& cfg,
                                Rng& rng, const EpochCallback& cb) {
  cfg.validate();
  if (z0.rows() != g.n) throw ShapeError("train_supervised: z0 rows vs graph nodes");
  if (y.n() != g.n) throw SizeMismatchError("train_supervised: labels vs graph nodes");
  if (train_mask.empty()) throw EmptyMaskError("train_supervised: empty train mask");
  if (val_mask.empty()) throw EmptyMaskError("train_supervised: empty validation mask");
  for (int i : val_mask)
    if (y.values[static_cast<size_t>(i)] < 0)
      throw EmptyMaskError("train_supervised: masked label on validation node " + std::to_string(i));
  {
    std::vector<char> in_train(static_cast<size_t>(g.n), 0);
    for (int i : train_mask) in_train[static_cast<size_t>(i)] = 1;
    for (int i : val_mask)
      if (in_train[static_cast<size_t>(i)])
        throw ConfigError("train_supervised: train and validation masks overlap at node " +
                          std::to_string(i));
  }
  const int k = static_cast<int>(z0.cols());
  if (cfg.max_epochs == 0)
    return {LabelVector(argmax_rows(z0), k), z0, 0, 0.0};

  NormalizedAdjacency s = normalized_adjacency(g);
  GcnModel model{xavier_init(k, k, rng), xavier_init(k, k, rng)};
  AdamState state = adam_init(k);

  GcnModel best_model = model;
  double best_acc = -1.0;
  double best_acc_loss = std::numeric_limits<double>::infinity();
  int epochs_without_improvement = 0;
  int epochs = 0;

  for (int t = 1; t <= cfg.max_epochs; ++t) {
    epochs = t;
    Mat mask;
    const Mat* mask_ptr = nullptr;
    if (cfg.dropout > 0.0) {
      mask = draw_dropout_mask(g.n, k, cfg.dropout, rng);
      mask_ptr = &mask;
    }
    ForwardTrace trace = forward_impl(s, z0, model, mask_ptr);
    auto [loss, grad_zhat] = cross_entropy_loss(trace.zhat, y, train_mask);
    double val_acc = accuracy(argmax_rows(trace.zhat), y.values, val_mask);
    if (cb) cb(t, loss, val_acc);

    if (val_acc > best_acc) {
      best_acc = val_acc;
      best_acc_loss = loss;
      best_model = model;
      epochs_without_improvement = 0;
    } else {
      if (val_acc == best_acc && loss < best_acc_loss) {
        best_acc_loss = loss;
        best_model = model;
      }
      ++epochs_without_improvement;
    }
    if (epochs_without_improvement >= cfg.patience) break;

    GcnModel grads = gcn_backward(s, trace, model, grad_zhat);
    add_weight_decay(grads, model, cfg.weight_decay);
    adam_step(model, grads, state, t, cfg);
  }

  ForwardTrace final_trace = forward_impl(s, z0, best_model, nullptr);
  return {LabelVector(argmax_rows(final_trace.zhat), k), final_trace.zhat, epochs, best_acc};
}

}  // namespace gnnseed
