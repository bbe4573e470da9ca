// Copyright 2026 The mtmct Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <utility>
#include <vector>

#include "mtmct/types.hpp"

namespace mtmct {

inline constexpr int kMetricHiddenWidth = 128;
inline constexpr int kMetricOutputWidth = 2;

/// Logit scale applied at scoring time. Compressing the logits keeps the
/// appearance score from saturating at +/-1 and overwhelming other cues
/// when it is combined with them.
inline constexpr double kMetricScoreTemperature = 0.1;

/// Pair classifier over appearance features: two hidden fully connected
/// layers of width 128 with ReLU, then a 2-way softmax. The input is the
/// element-wise absolute difference of a feature pair; output component 0
/// is the confidence that the pair is of different identities, component 1
/// that it is the same identity.
struct MetricNetwork {
  int input_dim = 0;
  std::uint64_t init_seed = 0;
  Eigen::MatrixXd w1;  // hidden x input_dim
  Eigen::VectorXd b1;
  Eigen::MatrixXd w2;  // hidden x hidden
  Eigen::VectorXd b2;
  Eigen::MatrixXd w3;  // 2 x hidden
  Eigen::VectorXd b3;
};

struct TrainConfig {
  double lr_initial = 1e-4;
  int epochs_initial = 30;
  double lr_decay_factor = 0.1;
  int epochs_decay = 10;
  int batch_size = 64;
  std::uint64_t seed = 0;
};

/// Provenance of one training pair, kept for audits and sampler tests.
struct PairMeta {
  int camera_a = -1;
  int camera_b = -1;
  int frame_a = 0;  // start frame of the anchor tracklet
  int frame_b = 0;  // start frame of the partner tracklet
};

/// One labeled training sample: the absolute feature difference plus the
/// same-identity label.
struct PairSample {
  FeatureVector diff;
  bool positive = false;
  PairMeta meta;
};

/// Fan-in scaled uniform initialization, biases zero. Deterministic for a
/// fixed (input_dim, seed).
MetricNetwork init_metric_network(int input_dim, std::uint64_t seed);

/// Softmax output (x0, x1) for one difference vector. The logits are
/// multiplied by `temperature` before the softmax; x0 + x1 == 1.
std::pair<double, double> forward(const MetricNetwork& net,
                                  const FeatureVector& diff,
                                  double temperature);

/// Similarity score x1 - x0 at the scoring temperature, computed on
/// |f_i - f_j|. Lies in (-1, 1); positive means "same identity".
double similarity(const MetricNetwork& net, const FeatureVector& f_i,
                  const FeatureVector& f_j);

struct TrainResult {
  MetricNetwork net;
  std::vector<double> epoch_mean_loss;
  double final_accuracy = 0.0;
};

/// Mini-batch gradient descent on the cross-entropy of the softmax output
/// (temperature 1 during training). The data order is reshuffled every
/// epoch from cfg.seed; the run is deterministic for a fixed seed. The
/// learning rate is lr_initial for the first epochs_initial epochs, then
/// lr_initial * lr_decay_factor for epochs_decay more.
TrainResult train(MetricNetwork net, std::span<const PairSample> data,
                  const TrainConfig& cfg);

/// Fraction of samples whose argmax class matches the label.
double accuracy(const MetricNetwork& net, std::span<const PairSample> data);

/// Mean training loss (cross-entropy at temperature 1) over `data`.
double mean_loss(const MetricNetwork& net, std::span<const PairSample> data);

// Flat parameter views in the fixed order (w1, b1, w2, b2, w3, b3), used by
// the serializer and by gradient verification against finite differences.
Eigen::VectorXd parameter_vector(const MetricNetwork& net);
MetricNetwork with_parameters(const MetricNetwork& net,
                              const Eigen::VectorXd& params);

/// Analytic gradient of mean_loss with respect to parameter_vector(net).
Eigen::VectorXd loss_gradient(const MetricNetwork& net,
                              std::span<const PairSample> data);

/// Versioned little-endian binary parameter file.
void save_metric_network(const MetricNetwork& net,
                         const std::filesystem::path& path);
MetricNetwork load_metric_network(const std::filesystem::path& path);

}  // namespace mtmct
