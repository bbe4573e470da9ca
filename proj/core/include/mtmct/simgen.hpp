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
#include <utility>
#include <vector>

#include "mtmct/types.hpp"

namespace mtmct {

enum class TopologyKind { kChain, kRing, kCustom };
enum class FrameRateMode { kNormal, kSparse };

/// Synthetic-world parameters. The defaults are the "standard" scenario
/// used throughout the test suite: a 4-camera chain, 20 identities, 5000
/// frames, 16-dim features, and appearance variance that grows with
/// topology distance (same camera < neighboring cameras < distant cameras).
///
/// The appearance knobs are calibrated as expected vector norms relative to
/// identity_spread = 1: identity embeddings have norm ~identity_spread, one
/// topology hop perturbs the appearance by ~camera_perturb, slow temporal
/// drift wanders with stationary norm ~temporal_drift, and per-detection
/// white noise has norm ~feature_noise.
struct SimConfig {
  TopologyKind topology = TopologyKind::kChain;
  int cameras = 4;
  std::vector<std::pair<int, int>> custom_edges;  // used with kCustom

  int identities = 20;
  int duration = 5000;  // frames
  int feature_dim = 16;

  double identity_spread = 1.0;
  double camera_perturb = 0.55;
  double temporal_drift = 0.10;
  double feature_noise = 0.06;
  double detection_noise = 2.0;  // center jitter, world units

  double dwell_mean = 900.0;
  double dwell_spread = 350.0;
  double transition_mean = 600.0;
  double transition_spread = 550.0;

  double miss_rate = 0.05;
  FrameRateMode frame_rate_mode = FrameRateMode::kNormal;

  /// When set, targets jump between all camera pairs with equal probability
  /// and every camera's appearance change is drawn independently, so no
  /// camera pair looks more alike than any other.
  bool open_topology = false;

  std::uint64_t seed = 0;
};

/// Generated world: topology, labeled detections, and the ground-truth
/// record stream. Truth holds one record per emitted detection (a dropped
/// detection is absent from both sides), so a perfect association of the
/// detections scores 1.0 on identity measures.
struct Scenario {
  SimConfig config;
  CameraTopology topology;
  std::vector<Detection> detections;  // sorted by (camera, frame, identity)
  std::vector<ObservationRecord> truth;

  int feature_dim() const { return config.feature_dim; }
  int duration() const { return config.duration; }

  /// Center-distance threshold for truth/hypothesis frame matching.
  double match_radius() const { return 3.0 * config.detection_noise; }

  /// First frame of the held-out tail split.
  int split_frame(double train_fraction = 0.8) const;
};

/// Deterministic for a fixed config (seed included). Throws on an invalid
/// config.
Scenario generate(const SimConfig& cfg);

/// Mean same-identity feature distance bucketed by topology hop count
/// between the two observations' cameras: [0] same camera, [1] adjacent,
/// [2] two hops, ... Used to check the variance ordering the samplers rely
/// on.
std::vector<double> same_identity_distance_by_hops(const Scenario& scenario,
                                                   int max_pairs_per_bucket,
                                                   std::uint64_t seed);

}  // namespace mtmct
