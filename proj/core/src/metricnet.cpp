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

#include "mtmct/metricnet.hpp"

#include <cmath>
#include <fstream>
#include <numeric>
#include <stdexcept>

#include "mtmct/rng.hpp"
#include "wire.hpp"

namespace mtmct {

namespace {

constexpr char kNetMagic[9] = "MTMCNETW";
constexpr std::uint32_t kNetVersion = 1;

void fill_uniform(Eigen::MatrixXd& m, double bound, Rng& rng) {
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      m(r, c) = rng.uniform(-bound, bound);
    }
  }
}

void check_input(const MetricNetwork& net, const FeatureVector& diff) {
  if (diff.size() != net.input_dim) {
    throw std::invalid_argument("input dimension mismatch");
  }
}

// Batched forward pass at temperature 1; rows are samples. Activations are
// kept for backpropagation.
struct BatchForward {
  Eigen::MatrixXd h1;      // B x hidden
  Eigen::MatrixXd h2;      // B x hidden
  Eigen::MatrixXd probs;   // B x 2
  double loss_sum = 0.0;   // summed cross-entropy
};

BatchForward batch_forward(const MetricNetwork& net, const Eigen::MatrixXd& x,
                           const std::vector<std::uint8_t>* labels) {
  BatchForward out;
  out.h1 = ((x * net.w1.transpose()).rowwise() + net.b1.transpose())
               .cwiseMax(0.0);
  out.h2 = ((out.h1 * net.w2.transpose()).rowwise() + net.b2.transpose())
               .cwiseMax(0.0);
  Eigen::MatrixXd logits =
      (out.h2 * net.w3.transpose()).rowwise() + net.b3.transpose();

  out.probs.resize(logits.rows(), 2);
  for (Eigen::Index i = 0; i < logits.rows(); ++i) {
    const double m = std::max(logits(i, 0), logits(i, 1));
    const double e0 = std::exp(logits(i, 0) - m);
    const double e1 = std::exp(logits(i, 1) - m);
    const double s = e0 + e1;
    out.probs(i, 0) = e0 / s;
    out.probs(i, 1) = e1 / s;
    if (labels) {
      const int y = (*labels)[static_cast<std::size_t>(i)] ? 1 : 0;
      out.loss_sum += -std::log(std::max(out.probs(i, y), 1e-300));
    }
  }
  return out;
}

struct Gradients {
  Eigen::MatrixXd w1, w2, w3;
  Eigen::VectorXd b1, b2, b3;
};

// Mean-loss gradient over the batch.
Gradients batch_backward(const MetricNetwork& net, const Eigen::MatrixXd& x,
                         const std::vector<std::uint8_t>& labels,
                         const BatchForward& fwd) {
  const double inv_b = 1.0 / static_cast<double>(x.rows());

  Eigen::MatrixXd dz = fwd.probs;  // B x 2
  for (Eigen::Index i = 0; i < dz.rows(); ++i) {
    dz(i, labels[static_cast<std::size_t>(i)] ? 1 : 0) -= 1.0;
  }
  dz *= inv_b;

  Gradients g;
  g.w3 = dz.transpose() * fwd.h2;
  g.b3 = dz.colwise().sum().transpose();

  Eigen::MatrixXd da2 = (dz * net.w3).array() *
                        (fwd.h2.array() > 0.0).cast<double>();
  g.w2 = da2.transpose() * fwd.h1;
  g.b2 = da2.colwise().sum().transpose();

  Eigen::MatrixXd da1 = (da2 * net.w2).array() *
                        (fwd.h1.array() > 0.0).cast<double>();
  g.w1 = da1.transpose() * x;
  g.b1 = da1.colwise().sum().transpose();
  return g;
}

Eigen::MatrixXd stack_rows(std::span<const PairSample> data,
                           std::span<const int> order, int dim) {
  Eigen::MatrixXd x(order.size(), dim);
  for (std::size_t i = 0; i < order.size(); ++i) {
    const FeatureVector& d = data[static_cast<std::size_t>(order[i])].diff;
    if (d.size() != dim) {
      throw std::invalid_argument("pair sample dimension mismatch");
    }
    x.row(static_cast<Eigen::Index>(i)) = d.transpose();
  }
  return x;
}

}  // namespace

MetricNetwork init_metric_network(int input_dim, std::uint64_t seed) {
  if (input_dim < 1) {
    throw std::invalid_argument("input_dim must be at least 1");
  }
  MetricNetwork net;
  net.input_dim = input_dim;
  net.init_seed = seed;
  net.w1.resize(kMetricHiddenWidth, input_dim);
  net.w2.resize(kMetricHiddenWidth, kMetricHiddenWidth);
  net.w3.resize(kMetricOutputWidth, kMetricHiddenWidth);
  net.b1 = Eigen::VectorXd::Zero(kMetricHiddenWidth);
  net.b2 = Eigen::VectorXd::Zero(kMetricHiddenWidth);
  net.b3 = Eigen::VectorXd::Zero(kMetricOutputWidth);

  Rng rng(seed);
  fill_uniform(net.w1, 1.0 / std::sqrt(static_cast<double>(input_dim)), rng);
  fill_uniform(net.w2, 1.0 / std::sqrt(static_cast<double>(kMetricHiddenWidth)),
               rng);
  fill_uniform(net.w3, 1.0 / std::sqrt(static_cast<double>(kMetricHiddenWidth)),
               rng);
  return net;
}

std::pair<double, double> forward(const MetricNetwork& net,
                                  const FeatureVector& diff,
                                  double temperature) {
  check_input(net, diff);
  if (!(temperature > 0.0)) {
    throw std::invalid_argument("temperature must be positive");
  }
  Eigen::VectorXd h1 = ((net.w1 * diff) + net.b1).cwiseMax(0.0);
  Eigen::VectorXd h2 = ((net.w2 * h1) + net.b2).cwiseMax(0.0);
  Eigen::VectorXd logits = (net.w3 * h2) + net.b3;
  logits *= temperature;

  const double m = std::max(logits(0), logits(1));
  const double e0 = std::exp(logits(0) - m);
  const double e1 = std::exp(logits(1) - m);
  const double s = e0 + e1;
  return {e0 / s, e1 / s};
}

double similarity(const MetricNetwork& net, const FeatureVector& f_i,
                  const FeatureVector& f_j) {
  if (f_i.size() != f_j.size()) {
    throw std::invalid_argument("feature dimension mismatch");
  }
  const FeatureVector diff = (f_i - f_j).cwiseAbs();
  auto [x0, x1] = forward(net, diff, kMetricScoreTemperature);
  return x1 - x0;
}

TrainResult train(MetricNetwork net, std::span<const PairSample> data,
                  const TrainConfig& cfg) {
  if (data.empty()) {
    throw std::invalid_argument("empty training data");
  }
  if (cfg.batch_size < 1) {
    throw std::invalid_argument("batch_size must be at least 1");
  }
  if (!(cfg.lr_initial > 0.0) || cfg.epochs_initial < 0 ||
      cfg.epochs_decay < 0 || !(cfg.lr_decay_factor > 0.0)) {
    throw std::invalid_argument("invalid training configuration");
  }

  TrainResult result;
  Rng rng(cfg.seed);
  std::vector<int> order(data.size());
  std::iota(order.begin(), order.end(), 0);

  const int total_epochs = cfg.epochs_initial + cfg.epochs_decay;
  for (int epoch = 0; epoch < total_epochs; ++epoch) {
    const double lr = epoch < cfg.epochs_initial
                          ? cfg.lr_initial
                          : cfg.lr_initial * cfg.lr_decay_factor;
    rng.shuffle(order);

    double loss_sum = 0.0;
    for (std::size_t begin = 0; begin < order.size();
         begin += static_cast<std::size_t>(cfg.batch_size)) {
      const std::size_t end =
          std::min(order.size(), begin + static_cast<std::size_t>(cfg.batch_size));
      std::span<const int> batch(order.data() + begin, end - begin);

      Eigen::MatrixXd x = stack_rows(data, batch, net.input_dim);
      std::vector<std::uint8_t> labels(batch.size());
      for (std::size_t i = 0; i < batch.size(); ++i) {
        labels[i] = data[static_cast<std::size_t>(batch[i])].positive ? 1 : 0;
      }

      BatchForward fwd = batch_forward(net, x, &labels);
      loss_sum += fwd.loss_sum;
      Gradients g = batch_backward(net, x, labels, fwd);

      net.w1 -= lr * g.w1;
      net.b1 -= lr * g.b1;
      net.w2 -= lr * g.w2;
      net.b2 -= lr * g.b2;
      net.w3 -= lr * g.w3;
      net.b3 -= lr * g.b3;
    }
    result.epoch_mean_loss.push_back(loss_sum /
                                     static_cast<double>(data.size()));
  }

  result.final_accuracy = accuracy(net, data);
  result.net = std::move(net);
  return result;
}

double accuracy(const MetricNetwork& net, std::span<const PairSample> data) {
  if (data.empty()) {
    throw std::invalid_argument("empty data");
  }
  std::size_t correct = 0;
  for (const PairSample& s : data) {
    auto [x0, x1] = forward(net, s.diff, 1.0);
    if ((x1 > x0) == s.positive) {
      ++correct;
    }
  }
  return static_cast<double>(correct) / static_cast<double>(data.size());
}

double mean_loss(const MetricNetwork& net, std::span<const PairSample> data) {
  if (data.empty()) {
    throw std::invalid_argument("empty data");
  }
  std::vector<int> order(data.size());
  std::iota(order.begin(), order.end(), 0);
  Eigen::MatrixXd x = stack_rows(data, order, net.input_dim);
  std::vector<std::uint8_t> labels(data.size());
  for (std::size_t i = 0; i < data.size(); ++i) {
    labels[i] = data[i].positive ? 1 : 0;
  }
  BatchForward fwd = batch_forward(net, x, &labels);
  return fwd.loss_sum / static_cast<double>(data.size());
}

Eigen::VectorXd parameter_vector(const MetricNetwork& net) {
  const Eigen::Index total = net.w1.size() + net.b1.size() + net.w2.size() +
                             net.b2.size() + net.w3.size() + net.b3.size();
  Eigen::VectorXd out(total);
  Eigen::Index at = 0;
  auto put = [&](const auto& m) {
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      for (Eigen::Index c = 0; c < m.cols(); ++c) {
        out(at++) = m(r, c);
      }
    }
  };
  put(net.w1);
  put(net.b1);
  put(net.w2);
  put(net.b2);
  put(net.w3);
  put(net.b3);
  return out;
}

MetricNetwork with_parameters(const MetricNetwork& net,
                              const Eigen::VectorXd& params) {
  MetricNetwork out = net;
  Eigen::Index at = 0;
  auto take = [&](auto& m) {
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      for (Eigen::Index c = 0; c < m.cols(); ++c) {
        m(r, c) = params(at++);
      }
    }
  };
  take(out.w1);
  take(out.b1);
  take(out.w2);
  take(out.b2);
  take(out.w3);
  take(out.b3);
  if (at != params.size()) {
    throw std::invalid_argument("parameter vector size mismatch");
  }
  return out;
}

Eigen::VectorXd loss_gradient(const MetricNetwork& net,
                              std::span<const PairSample> data) {
  if (data.empty()) {
    throw std::invalid_argument("empty data");
  }
  std::vector<int> order(data.size());
  std::iota(order.begin(), order.end(), 0);
  Eigen::MatrixXd x = stack_rows(data, order, net.input_dim);
  std::vector<std::uint8_t> labels(data.size());
  for (std::size_t i = 0; i < data.size(); ++i) {
    labels[i] = data[i].positive ? 1 : 0;
  }
  BatchForward fwd = batch_forward(net, x, &labels);
  Gradients g = batch_backward(net, x, labels, fwd);

  MetricNetwork grads = net;
  grads.w1 = g.w1;
  grads.b1 = g.b1;
  grads.w2 = g.w2;
  grads.b2 = g.b2;
  grads.w3 = g.w3;
  grads.b3 = g.b3;
  return parameter_vector(grads);
}

void save_metric_network(const MetricNetwork& net,
                         const std::filesystem::path& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) {
    throw std::runtime_error("cannot open " + path.string() + " for writing");
  }
  wire::write_magic(os, kNetMagic);
  wire::write_u32(os, kNetVersion);
  wire::write_u32(os, static_cast<std::uint32_t>(net.input_dim));
  wire::write_u32(os, kMetricHiddenWidth);
  wire::write_u32(os, kMetricOutputWidth);
  wire::write_u64(os, net.init_seed);
  auto dump = [&](const auto& m) {
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      for (Eigen::Index c = 0; c < m.cols(); ++c) {
        wire::write_f64(os, m(r, c));
      }
    }
  };
  dump(net.w1);
  dump(net.b1);
  dump(net.w2);
  dump(net.b2);
  dump(net.w3);
  dump(net.b3);
  if (!os) {
    throw std::runtime_error("failed writing " + path.string());
  }
}

MetricNetwork load_metric_network(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) {
    throw std::runtime_error("cannot open " + path.string());
  }
  wire::expect_magic(is, kNetMagic, path.string());
  const std::uint32_t version = wire::read_u32(is);
  if (version != kNetVersion) {
    throw std::runtime_error("unsupported metric file version " +
                             std::to_string(version));
  }
  const std::uint32_t dim = wire::read_u32(is);
  const std::uint32_t hidden = wire::read_u32(is);
  const std::uint32_t out_dim = wire::read_u32(is);
  if (dim == 0 || hidden != kMetricHiddenWidth ||
      out_dim != kMetricOutputWidth) {
    throw std::runtime_error("inconsistent metric file shapes in " +
                             path.string());
  }
  MetricNetwork net = init_metric_network(static_cast<int>(dim), 0);
  net.init_seed = wire::read_u64(is);
  auto slurp = [&](auto& m) {
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      for (Eigen::Index c = 0; c < m.cols(); ++c) {
        m(r, c) = wire::read_f64(is);
      }
    }
  };
  slurp(net.w1);
  slurp(net.b1);
  slurp(net.w2);
  slurp(net.b2);
  slurp(net.w3);
  slurp(net.b3);
  return net;
}

}  // namespace mtmct
