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

#include <span>
#include <vector>

#include "mtmct/featstore.hpp"
#include "mtmct/metricnet.hpp"
#include "mtmct/types.hpp"

namespace mtmct {

/// Window-restricted training-pair construction. Instead of drawing pairs
/// from the whole train set, pairs are drawn from the temporal neighborhood
/// the metric will actually score: within tau_s frames in the same camera
/// for the single-camera metric, within tau_m frames (positives forced to a
/// different camera) for the cross-camera metric. Windows compare tracklet
/// start frames.
struct SamplerConfig {
  int tau_s = 600;
  int tau_m = 2400;
  int pairs_requested = 0;
  std::uint64_t seed = 0;
  /// When set, cross-camera positives are additionally restricted to
  /// topology neighbors of the anchor camera. Off by default: the window
  /// already enforces locality.
  bool strict_neighbors = false;
};

/// Same-camera pairs with |start_a - start_b| <= tau_s. Positives share
/// an identity, negatives differ; exactly pairs_requested/2 of each
/// (rounded down to even). Anchor, pair type, and partner draws are uniform
/// under cfg.seed; anchors with no eligible partner of the requested type
/// are skipped. Throws "insufficient diversity" when no positive or no
/// negative pair exists anywhere.
std::vector<PairSample> sample_intra(std::span<const Tracklet> tracklets,
                                     const SamplerConfig& cfg);

/// Cross-window pairs with |start_a - start_b| <= tau_m. Positives must
/// come from a different camera than the anchor; negatives come from any
/// camera, the anchor's included. Throws "no cross-camera positives" when
/// no identity ever appears in two cameras within tau_m.
std::vector<PairSample> sample_inter(std::span<const Tracklet> tracklets,
                                     const CameraTopology& topology,
                                     const SamplerConfig& cfg);

/// Unrestricted pairs over the whole tracklet set (the conventional
/// training regime the window-restricted samplers are compared against).
std::vector<PairSample> sample_global(std::span<const Tracklet> tracklets,
                                      const SamplerConfig& cfg);

/// Distance statistics from sampled pairs. The Euclidean norm of the
/// absolute difference vector equals the pair's feature distance, so the
/// stats can be computed without the original feature pair.
DistanceStats compute_stats_from_samples(std::span<const PairSample> samples);

}  // namespace mtmct
