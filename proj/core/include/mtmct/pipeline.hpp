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

#include "mtmct/cluster.hpp"
#include "mtmct/scorer.hpp"
#include "mtmct/simgen.hpp"
#include "mtmct/types.hpp"

namespace mtmct {

struct PipelineConfig {
  int tracklet_len = 40;
  int sct_window = 150;
  int mct_window = 6000;
  /// Windows advance by this fraction of their length, so consecutive
  /// windows overlap and associations formed in the overlap stay open to
  /// further merging.
  double window_stride_fraction = 0.5;
  /// Tracklet stage: detection pairs whose center displacement exceeds
  /// this many units per frame of gap can never join one tracklet.
  double motion_gate = 25.0;
  /// Cross-camera stage: a pair of time-adjacent trajectories on a known
  /// camera edge is infeasible when the gap exceeds this multiple of the
  /// edge's mean transition time.
  double transition_slack = 3.0;
};

/// Tracklets obtained by grouping labeled detections by (camera, identity,
/// block). This is the training-side tracklet source; association plays no
/// part in it.
std::vector<Tracklet> ground_truth_tracklets(
    std::span<const Detection> detections, int tracklet_len);

/// Splits each camera's timeline into consecutive tracklet_len blocks and
/// partitions the detections of each block by appearance, with same-frame
/// pairs and motion-gate violators forbidden. Input order does not matter;
/// detections are sorted internally.
std::vector<Tracklet> form_tracklets(std::span<const Detection> detections,
                                     const PipelineConfig& cfg,
                                     const Scorer& appearance);

/// Associates one camera's tracklets into trajectories under a sliding
/// window. Tracklets enter the optimization in the first window covering
/// their start frame; every trajectory formed so far stays a merge
/// candidate, which is what lets a target returning to the camera after a
/// long gap rejoin its earlier trajectory. Members of one trajectory never
/// overlap in time. Throws if the input mixes cameras.
std::vector<Trajectory> single_camera_tracking(
    std::span<const Tracklet> tracklets, const Scorer& scorer,
    const PipelineConfig& cfg);

/// Associates trajectories from all cameras into tracks under the (much
/// longer) cross-camera window. A track may contain several trajectories
/// from one camera. Feasibility of a merge is checked on the time-adjacent
/// member pairs of the combined track: overlapping members are infeasible,
/// and a camera-edge pair whose gap exceeds transition_slack times the mean
/// transition is infeasible. Output tracks get fresh contiguous global ids.
std::vector<Track> multi_camera_tracking(std::span<const Trajectory> trajectories,
                                         const Scorer& scorer,
                                         const CameraTopology& topology,
                                         const PipelineConfig& cfg);

/// Scorer per association stage. The tracklet stage uses the plain
/// appearance baseline in production; it is pluggable so verification runs
/// can drive every stage from ground truth.
struct StageScorers {
  Scorer tracklet;
  Scorer sct;
  Scorer mct;
};

struct TrackingResult {
  std::vector<Tracklet> tracklets;
  std::vector<Trajectory> trajectories;
  std::vector<Track> tracks;
};

TrackingResult run(std::span<const Detection> detections,
                   const CameraTopology& topology,
                   const StageScorers& scorers, const PipelineConfig& cfg);
TrackingResult run(const Scenario& scenario, const StageScorers& scorers,
                   const PipelineConfig& cfg);

}  // namespace mtmct
