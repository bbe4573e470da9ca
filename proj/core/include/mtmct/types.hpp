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

#include <Eigen/Core>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace mtmct {

/// Appearance feature. The dimension is fixed per scenario.
using FeatureVector = Eigen::VectorXd;

/// Inclusive frame interval on the global clock.
struct FrameRange {
  int start = 0;
  int end = 0;

  int length() const { return end - start + 1; }
  bool overlaps(const FrameRange& o) const {
    return start <= o.end && o.start <= end;
  }
};

/// One bounding-box observation. `identity` is set on ground-truth data
/// only; the same struct serves labeled (training) and unlabeled (tracking)
/// use. `feature_row` is bookkeeping for the on-disk feature container.
struct Detection {
  int camera_id = 0;
  int frame = 0;
  Eigen::Vector2d center{0.0, 0.0};
  std::optional<int> identity;
  FeatureVector feature;
  int feature_row = -1;
};

/// Short single-camera fragment: detections from one camera inside one
/// fixed-length frame block, sorted by frame, with their mean feature.
struct Tracklet {
  int camera_id = 0;
  FrameRange frame_range;
  std::vector<Detection> detections;
  FeatureVector feature;
  std::optional<int> label;
};

/// Full single-camera path of one target, built from tracklets whose frame
/// ranges never overlap and which are ordered by start frame.
struct Trajectory {
  int camera_id = 0;
  std::vector<Tracklet> tracklets;
  FeatureVector feature;
  FrameRange frame_range;
};

/// Cross-camera identity hypothesis. A track may hold several trajectories
/// from the same camera (a target that returns).
struct Track {
  int global_id = 0;
  std::vector<Trajectory> trajectories;
};

/// One per-frame observation record, used both for ground truth and for
/// serialized hypotheses.
struct ObservationRecord {
  int camera_id = 0;
  int frame = 0;
  int id = 0;
  Eigen::Vector2d center{0.0, 0.0};
};

struct TransitionTime {
  double mean = 0.0;
  double spread = 0.0;
};

/// Undirected camera adjacency with per-edge transition-time statistics.
/// Edges are stored with normalized (a < b) keys, so the neighbor relation
/// is symmetric by construction.
class CameraTopology {
 public:
  CameraTopology() = default;

  void add_camera(int cam) { camera_ids_.insert(cam); }
  void add_edge(int a, int b, TransitionTime t = {});

  const std::set<int>& camera_ids() const { return camera_ids_; }
  bool has_camera(int cam) const { return camera_ids_.count(cam) > 0; }
  bool has_edge(int a, int b) const;
  const std::map<std::pair<int, int>, TransitionTime>& edges() const {
    return edges_;
  }
  std::optional<TransitionTime> transition(int a, int b) const;

 private:
  std::set<int> camera_ids_;
  std::map<std::pair<int, int>, TransitionTime> edges_;
};

/// All cameras sharing an edge with `cam`; never contains `cam` itself.
/// Throws std::invalid_argument for an unknown camera id.
std::set<int> neighbors(const CameraTopology& topology, int cam);

/// Diagnostic check; returns a human-readable description of every
/// violation (self-edges, non-positive transition means, edges touching
/// unknown cameras). An empty result means the topology is well formed.
std::vector<std::string> validate_topology(const CameraTopology& topology);

/// Throws std::invalid_argument if the tracklet breaks its invariants:
/// mixed cameras, unsorted detections, or a range longer than
/// `tracklet_len`.
void validate_tracklet(const Tracklet& t, int tracklet_len);

}  // namespace mtmct
