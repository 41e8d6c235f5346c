#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "gnnseed/graph.hpp"
#include "gnnseed/rng.hpp"
#include "gnnseed/types.hpp"

namespace gnnseed {

// Two K x K weight matrices; the layer count is fixed at 2 and the hidden
// width equals the class count throughout.
struct GcnModel {
  Mat w0, w1;
};

struct TrainConfig {
  double learning_rate = 1e-3;
  int max_epochs = 10000;   // clustering default; see classification_train_defaults()
  int patience = 500;       // epochs without improvement before stopping
  double loss_tolerance = 1e-6;  // minimum improvement that counts
  double adam_beta1 = 0.9;
  double adam_beta2 = 0.999;
  double adam_epsilon = 1e-8;
  double dropout = 0.0;       // hidden-layer dropout probability, off by default
  double weight_decay = 0.0;  // L2 coefficient added to weight gradients, off by default
  uint64_t seed = 0;

  void validate() const;
};

TrainConfig clustering_train_defaults();      // 10000 epochs, patience 500 on loss
TrainConfig classification_train_defaults();  // 2000 epochs, patience 200 on val accuracy

// Everything the backward pass needs: a1 = S*Z0, p1 = a1*W0, z1 = relu(p1)
// (after dropout, when enabled), a2 = S*z1, p2 = a2*W1, z2 = relu(p2), and
// zhat = Z0 + z1 + z2.
struct ForwardTrace {
  Mat a1, p1, z1, a2, p2, z2, zhat;
};

// Entries i.i.d. uniform on [-b, b] with b = sqrt(6 / (rows + cols)), drawn
// row-major.
Mat xavier_init(int rows, int cols, Rng& rng);

std::pair<Mat, ForwardTrace> gcn_forward(const NormalizedAdjacency& s, const Mat& z0,
                                         const GcnModel& model);

// Gradients of a scalar loss with respect to both weight matrices, given the
// loss gradient at zhat. Exact for the forward pass captured in `trace`.
GcnModel gcn_backward(const NormalizedAdjacency& s, const ForwardTrace& trace,
                      const GcnModel& model, const Mat& grad_zhat);

// L = -Tr(C^T B C)/2m + (sqrt(K)/n) ||colsum(C)|| - 1 with C = softmax(zhat)
// row-wise. Returns the loss and its exact gradient with respect to zhat.
std::pair<double, Mat> dmon_loss(const Graph& g, const Mat& zhat);

// Mean over `train_mask` of -log softmax(zhat_i)[y_i], log-sum-exp
// stabilized; the gradient is zero outside the mask.
std::pair<double, Mat> cross_entropy_loss(const Mat& zhat, const LabelVector& y,
                                          const std::vector<int>& train_mask);

struct AdamState {
  Mat m0, v0, m1, v1;
};

AdamState adam_init(int k);

// Standard Adam with bias correction; t is the 1-based step index.
void adam_step(GcnModel& model, const GcnModel& grads, AdamState& state, int t,
               const TrainConfig& cfg);

// Row argmax with ties to the lowest column index.
std::vector<int> argmax_rows(const Mat& x);

// Optional per-epoch observer; val_metric is NaN for unsupervised training.
using EpochCallback = std::function<void(int epoch, double loss, double val_metric)>;

struct UnsupTrainResult {
  LabelVector labels;
  Mat zhat;
  int epochs = 0;
};

// Full-batch training on dmon_loss from Xavier-initialized weights; stops at
// max_epochs or after `patience` epochs without a loss improvement of at
// least loss_tolerance; the best-loss parameters are restored. Labels are
// the row argmax of the final zhat. max_epochs = 0 skips training entirely
// and returns argmax of z0 with zhat = z0 (useful to probe the identity
// skip path).
UnsupTrainResult train_unsupervised(const Graph& g, const Mat& z0, const TrainConfig& cfg,
                                    Rng& rng, const EpochCallback& cb = {});

struct SupTrainResult {
  LabelVector pred;
  Mat zhat;
  int epochs = 0;
  double best_val_accuracy = 0.0;
};

// Full-batch training on cross_entropy_loss over train_mask with validation
// accuracy recorded every epoch. The restored parameters are those of the
// epoch with the highest validation accuracy; ties go to the epoch with the
// lowest training loss, then to the earliest epoch (tiny validation sets
// saturate long before the decision margins settle, so earliest-only would
// routinely restore undertrained weights). Patience counts epochs since the
// last strict validation-accuracy improvement.
SupTrainResult train_supervised(const Graph& g, const Mat& z0, const LabelVector& y,
                                const std::vector<int>& train_mask,
                                const std::vector<int>& val_mask, const TrainConfig& cfg,
                                Rng& rng, const EpochCallback& cb = {});

}  // namespace gnnseed
