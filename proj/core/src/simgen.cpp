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

#include "mtmct/simgen.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>
#include <stdexcept>

#include "mtmct/rng.hpp"

namespace mtmct {

namespace {

constexpr double kViewSize = 1000.0;   // square camera view, world units
constexpr double kDriftTimescale = 500.0;  // frames
constexpr int kMinDwell = 20;

void validate_config(const SimConfig& cfg) {
  if (cfg.cameras < 1 || cfg.identities < 1 || cfg.duration < 1 ||
      cfg.feature_dim < 1) {
    throw std::invalid_argument("counts and dimensions must be positive");
  }
  if (cfg.miss_rate < 0.0 || cfg.miss_rate > 1.0) {
    throw std::invalid_argument("miss_rate must be in [0, 1]");
  }
  if (cfg.identity_spread < 0.0 || cfg.camera_perturb < 0.0 ||
      cfg.temporal_drift < 0.0 || cfg.feature_noise < 0.0 ||
      cfg.detection_noise < 0.0) {
    throw std::invalid_argument("appearance scales must be non-negative");
  }
  if (cfg.dwell_mean <= 0.0 || cfg.transition_mean <= 0.0 ||
      cfg.dwell_spread < 0.0 || cfg.transition_spread < 0.0) {
    throw std::invalid_argument("dwell/transition parameters must be valid");
  }
  if (cfg.topology == TopologyKind::kCustom && cfg.custom_edges.empty() &&
      cfg.cameras > 1) {
    throw std::invalid_argument("custom topology needs edges");
  }
}

CameraTopology build_topology(const SimConfig& cfg) {
  CameraTopology topo;
  for (int c = 0; c < cfg.cameras; ++c) {
    topo.add_camera(c);
  }
  const TransitionTime t{cfg.transition_mean, cfg.transition_spread};
  if (cfg.open_topology) {
    for (int a = 0; a < cfg.cameras; ++a) {
      for (int b = a + 1; b < cfg.cameras; ++b) {
        topo.add_edge(a, b, t);
      }
    }
    return topo;
  }
  switch (cfg.topology) {
    case TopologyKind::kChain:
      for (int c = 0; c + 1 < cfg.cameras; ++c) {
        topo.add_edge(c, c + 1, t);
      }
      break;
    case TopologyKind::kRing:
      for (int c = 0; c + 1 < cfg.cameras; ++c) {
        topo.add_edge(c, c + 1, t);
      }
      if (cfg.cameras > 2) {
        topo.add_edge(cfg.cameras - 1, 0, t);
      }
      break;
    case TopologyKind::kCustom:
      for (auto [a, b] : cfg.custom_edges) {
        if (a < 0 || b < 0 || a >= cfg.cameras || b >= cfg.cameras || a == b) {
          throw std::invalid_argument("invalid custom edge");
        }
        topo.add_edge(a, b, t);
      }
      break;
  }
  return topo;
}

// Per-camera appearance change: a linear perturbation accumulated along the
// camera graph. In the default mode the perturbations compose along a BFS
// tree from camera 0, so the appearance gap between two cameras grows with
// their topology distance. In open-topology mode every camera draws an
// independent perturbation of one-hop strength, which flattens the gap.
struct CameraMaps {
  std::vector<Eigen::MatrixXd> mix;   // per camera, D x D
  std::vector<Eigen::VectorXd> bias;  // per camera, D
};

CameraMaps build_camera_maps(const SimConfig& cfg,
                             const CameraTopology& topo, Rng& rng) {
  const int d = cfg.feature_dim;
  const double elem_sd = cfg.camera_perturb / std::sqrt(static_cast<double>(d));
  const double bias_sd =
      cfg.camera_perturb * cfg.identity_spread / std::sqrt(static_cast<double>(d));

  CameraMaps maps;
  maps.mix.assign(cfg.cameras, Eigen::MatrixXd::Zero(d, d));
  maps.bias.assign(cfg.cameras, Eigen::VectorXd::Zero(d));

  auto draw_perturbation = [&](Eigen::MatrixXd& p, Eigen::VectorXd& q) {
    p.resize(d, d);
    q.resize(d);
    for (int r = 0; r < d; ++r) {
      for (int c = 0; c < d; ++c) {
        p(r, c) = rng.normal(0.0, elem_sd);
      }
    }
    for (int r = 0; r < d; ++r) {
      q(r) = rng.normal(0.0, bias_sd);
    }
  };

  if (cfg.open_topology) {
    for (int c = 0; c < cfg.cameras; ++c) {
      Eigen::MatrixXd p;
      Eigen::VectorXd q;
      draw_perturbation(p, q);
      maps.mix[c] = p;
      maps.bias[c] = q;
    }
    return maps;
  }

  // BFS from the smallest camera id; unreachable cameras keep the identity
  // appearance (no edges to accumulate over).
  std::vector<bool> seen(cfg.cameras, false);
  std::deque<int> queue;
  queue.push_back(0);
  seen[0] = true;
  while (!queue.empty()) {
    const int cur = queue.front();
    queue.pop_front();
    for (int nb : neighbors(topo, cur)) {
      if (nb < 0 || nb >= cfg.cameras || seen[nb]) {
        continue;
      }
      Eigen::MatrixXd p;
      Eigen::VectorXd q;
      draw_perturbation(p, q);
      maps.mix[nb] = maps.mix[cur] + p;
      maps.bias[nb] = maps.bias[cur] + q;
      seen[nb] = true;
      queue.push_back(nb);
    }
  }
  return maps;
}

int draw_duration(Rng& rng, double mean, double spread, int minimum) {
  const double v = rng.uniform(mean - spread, mean + spread);
  return std::max(minimum, static_cast<int>(std::lround(v)));
}

// Hop distance between cameras on the topology graph (BFS).
std::vector<std::vector<int>> hop_distances(const CameraTopology& topo) {
  std::vector<int> cams(topo.camera_ids().begin(), topo.camera_ids().end());
  std::map<int, int> pos;
  for (std::size_t i = 0; i < cams.size(); ++i) {
    pos[cams[i]] = static_cast<int>(i);
  }
  std::vector<std::vector<int>> dist(
      cams.size(), std::vector<int>(cams.size(), -1));
  for (std::size_t s = 0; s < cams.size(); ++s) {
    std::deque<int> queue{cams[s]};
    dist[s][s] = 0;
    while (!queue.empty()) {
      const int cur = queue.front();
      queue.pop_front();
      for (int nb : neighbors(topo, cur)) {
        const int ni = pos.at(nb);
        if (dist[s][static_cast<std::size_t>(ni)] < 0) {
          dist[s][static_cast<std::size_t>(ni)] =
              dist[s][static_cast<std::size_t>(pos.at(cur))] + 1;
          queue.push_back(nb);
        }
      }
    }
  }
  return dist;
}

}  // namespace

int Scenario::split_frame(double train_fraction) const {
  return static_cast<int>(config.duration * train_fraction);
}

Scenario generate(const SimConfig& cfg) {
  validate_config(cfg);

  Scenario scenario;
  scenario.config = cfg;
  scenario.topology = build_topology(cfg);

  const int d = cfg.feature_dim;
  const double id_sd = cfg.identity_spread / std::sqrt(static_cast<double>(d));
  const double drift_sd = cfg.temporal_drift / std::sqrt(static_cast<double>(d));
  const double noise_sd = cfg.feature_noise / std::sqrt(static_cast<double>(d));
  const double rho = std::exp(-1.0 / kDriftTimescale);
  const double drift_kick = std::sqrt(1.0 - rho * rho);

  // Identity embeddings.
  Rng id_rng(cfg.seed, 1);
  std::vector<Eigen::VectorXd> embedding(cfg.identities);
  for (int i = 0; i < cfg.identities; ++i) {
    embedding[i].resize(d);
    for (int k = 0; k < d; ++k) {
      embedding[i](k) = id_rng.normal(0.0, id_sd);
    }
  }

  Rng map_rng(cfg.seed, 2);
  const CameraMaps maps = build_camera_maps(cfg, scenario.topology, map_rng);

  // Per-camera base appearance of each identity.
  std::vector<std::vector<Eigen::VectorXd>> base(
      cfg.cameras, std::vector<Eigen::VectorXd>(cfg.identities));
  for (int c = 0; c < cfg.cameras; ++c) {
    for (int i = 0; i < cfg.identities; ++i) {
      base[c][i] = embedding[i] + maps.mix[c] * embedding[i] + maps.bias[c];
    }
  }

  const int sparse_stride =
      cfg.frame_rate_mode == FrameRateMode::kSparse
          ? std::max(1, static_cast<int>(std::lround(cfg.dwell_mean)))
          : 1;

  for (int id = 0; id < cfg.identities; ++id) {
    Rng rng(cfg.seed, 1000 + static_cast<std::uint64_t>(id));

    int frame = static_cast<int>(rng.uniform(0.0, cfg.duration / 4.0));
    int camera = static_cast<int>(rng.uniform_index(
        static_cast<std::size_t>(cfg.cameras)));

    // Stationary start for the slow appearance drift.
    Eigen::VectorXd drift(d);
    for (int k = 0; k < d; ++k) {
      drift(k) = rng.normal(0.0, drift_sd);
    }

    while (frame < cfg.duration) {
      // One camera visit.
      const int dwell =
          draw_duration(rng, cfg.dwell_mean, cfg.dwell_spread, kMinDwell);
      Eigen::Vector2d pos{rng.uniform(0.1 * kViewSize, 0.9 * kViewSize),
                          rng.uniform(0.1 * kViewSize, 0.9 * kViewSize)};
      const double angle = rng.uniform(0.0, 2.0 * M_PI);
      const double speed = rng.uniform(1.0, 4.0);
      Eigen::Vector2d vel{speed * std::cos(angle), speed * std::sin(angle)};

      const int visit_end = std::min(cfg.duration, frame + dwell);
      for (; frame < visit_end; ++frame) {
        for (int k = 0; k < d; ++k) {
          drift(k) = rho * drift(k) + drift_kick * rng.normal(0.0, drift_sd);
        }
        pos += vel;
        for (int axis = 0; axis < 2; ++axis) {
          if (pos(axis) < 0.0) {
            pos(axis) = -pos(axis);
            vel(axis) = -vel(axis);
          } else if (pos(axis) > kViewSize) {
            pos(axis) = 2.0 * kViewSize - pos(axis);
            vel(axis) = -vel(axis);
          }
        }

        // Draw the jitter and the miss coin unconditionally so the walk is
        // identical across frame-rate modes.
        Eigen::Vector2d jitter{rng.normal(0.0, cfg.detection_noise),
                               rng.normal(0.0, cfg.detection_noise)};
        const bool missed = rng.bernoulli(cfg.miss_rate);
        if (missed || frame % sparse_stride != 0) {
          continue;
        }

        Detection det;
        det.camera_id = camera;
        det.frame = frame;
        det.center = pos + jitter;
        det.identity = id;
        det.feature.resize(d);
        for (int k = 0; k < d; ++k) {
          det.feature(k) =
              base[camera][id](k) + drift(k) + rng.normal(0.0, noise_sd);
        }
        scenario.detections.push_back(std::move(det));
      }
      if (frame >= cfg.duration) {
        break;
      }

      // Transition to a neighboring camera (invisible while in transit).
      const std::set<int> nbs = neighbors(scenario.topology, camera);
      if (nbs.empty()) {
        break;  // single camera, nowhere to go; the visit above ran out
      }
      std::vector<int> choices(nbs.begin(), nbs.end());
      camera = choices[rng.uniform_index(choices.size())];
      const int transit = draw_duration(rng, cfg.transition_mean,
                                        cfg.transition_spread, 1);
      // Drift keeps evolving while the target is unobserved.
      for (int t = 0; t < transit && frame < cfg.duration; ++t, ++frame) {
        for (int k = 0; k < d; ++k) {
          drift(k) = rho * drift(k) + drift_kick * rng.normal(0.0, drift_sd);
        }
      }
    }
  }

  std::sort(scenario.detections.begin(), scenario.detections.end(),
            [](const Detection& a, const Detection& b) {
              if (a.camera_id != b.camera_id) return a.camera_id < b.camera_id;
              if (a.frame != b.frame) return a.frame < b.frame;
              return a.identity.value_or(-1) < b.identity.value_or(-1);
            });
  scenario.truth.reserve(scenario.detections.size());
  for (std::size_t i = 0; i < scenario.detections.size(); ++i) {
    Detection& det = scenario.detections[i];
    det.feature_row = static_cast<int>(i);
    scenario.truth.push_back(ObservationRecord{
        det.camera_id, det.frame, *det.identity, det.center});
  }
  return scenario;
}

std::vector<double> same_identity_distance_by_hops(const Scenario& scenario,
                                                   int max_pairs_per_bucket,
                                                   std::uint64_t seed) {
  const auto dist = hop_distances(scenario.topology);
  int max_hops = 0;
  for (const auto& row : dist) {
    for (int v : row) {
      max_hops = std::max(max_hops, v);
    }
  }

  // Group detections by identity for pair drawing.
  std::map<int, std::vector<const Detection*>> by_id;
  for (const Detection& det : scenario.detections) {
    by_id[*det.identity].push_back(&det);
  }

  std::vector<double> sum(static_cast<std::size_t>(max_hops) + 1, 0.0);
  std::vector<int> count(static_cast<std::size_t>(max_hops) + 1, 0);
  Rng rng(seed, 77);

  const int attempts = max_pairs_per_bucket * (max_hops + 1) * 8;
  std::vector<int> ids;
  for (const auto& [id, obs] : by_id) {
    if (obs.size() >= 2) {
      ids.push_back(id);
    }
  }
  if (ids.empty()) {
    return sum;
  }
  for (int it = 0; it < attempts; ++it) {
    const int id = ids[rng.uniform_index(ids.size())];
    const auto& obs = by_id[id];
    const Detection* a = obs[rng.uniform_index(obs.size())];
    const Detection* b = obs[rng.uniform_index(obs.size())];
    if (a == b) {
      continue;
    }
    const int h = dist[static_cast<std::size_t>(a->camera_id)]
                      [static_cast<std::size_t>(b->camera_id)];
    if (h < 0 || count[static_cast<std::size_t>(h)] >= max_pairs_per_bucket) {
      continue;
    }
    sum[static_cast<std::size_t>(h)] += (a->feature - b->feature).norm();
    count[static_cast<std::size_t>(h)] += 1;
  }
  for (std::size_t h = 0; h < sum.size(); ++h) {
    sum[h] = count[h] > 0 ? sum[h] / count[h] : 0.0;
  }
  return sum;
}

}  // namespace mtmct
