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

#include "mtmct/types.hpp"

#include <algorithm>
#include <stdexcept>

namespace mtmct {

namespace {
std::pair<int, int> norm_edge(int a, int b) {
  return a <= b ? std::make_pair(a, b) : std::make_pair(b, a);
}
}  // namespace

void CameraTopology::add_edge(int a, int b, TransitionTime t) {
  edges_[norm_edge(a, b)] = t;
}

bool CameraTopology::has_edge(int a, int b) const {
  return edges_.count(norm_edge(a, b)) > 0;
}

std::optional<TransitionTime> CameraTopology::transition(int a, int b) const {
  auto it = edges_.find(norm_edge(a, b));
  if (it == edges_.end()) {
    return std::nullopt;
  }
  return it->second;
}

std::set<int> neighbors(const CameraTopology& topology, int cam) {
  if (!topology.has_camera(cam)) {
    throw std::invalid_argument("unknown camera id " + std::to_string(cam));
  }
  std::set<int> out;
  for (const auto& [edge, t] : topology.edges()) {
    if (edge.first == cam && edge.second != cam) {
      out.insert(edge.second);
    } else if (edge.second == cam && edge.first != cam) {
      out.insert(edge.first);
    }
  }
  return out;
}

std::vector<std::string> validate_topology(const CameraTopology& topology) {
  std::vector<std::string> violations;
  for (const auto& [edge, t] : topology.edges()) {
    const std::string name =
        "(" + std::to_string(edge.first) + "," + std::to_string(edge.second) + ")";
    if (edge.first == edge.second) {
      violations.push_back("self-edge " + name);
    }
    if (!topology.has_camera(edge.first) || !topology.has_camera(edge.second)) {
      violations.push_back("edge " + name + " references unknown camera");
    }
    if (t.mean <= 0.0) {
      violations.push_back("non-positive transition mean on edge " + name);
    }
    if (t.spread < 0.0) {
      violations.push_back("negative transition spread on edge " + name);
    }
  }
  return violations;
}

void validate_tracklet(const Tracklet& t, int tracklet_len) {
  if (t.detections.empty()) {
    throw std::invalid_argument("tracklet has no detections");
  }
  for (const Detection& d : t.detections) {
    if (d.camera_id != t.camera_id) {
      throw std::invalid_argument("tracklet mixes cameras");
    }
  }
  if (!std::is_sorted(t.detections.begin(), t.detections.end(),
                      [](const Detection& a, const Detection& b) {
                        return a.frame < b.frame;
                      })) {
    throw std::invalid_argument("tracklet detections not sorted by frame");
  }
  if (t.frame_range.length() > tracklet_len) {
    throw std::invalid_argument("tracklet longer than the configured block");
  }
}

}  // namespace mtmct
