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

#include "mtmct/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <unordered_map>

#include "mtmct/featstore.hpp"

namespace mtmct {

namespace {

// Instances up to this size go to the exhaustive solver; larger ones to the
// greedy + local-search heuristic.
constexpr int kExactSolveLimit = 8;

Partition solve(const SimilarityGraph& g) {
  if (g.size() <= kExactSolveLimit) {
    return solve_exact(g, kExactSolveLimit);
  }
  return solve_heuristic(g);
}

Tracklet make_tracklet(int camera, std::vector<Detection> detections) {
  Tracklet t;
  t.camera_id = camera;
  std::sort(detections.begin(), detections.end(),
            [](const Detection& a, const Detection& b) {
              if (a.frame != b.frame) return a.frame < b.frame;
              if (a.center.x() != b.center.x())
                return a.center.x() < b.center.x();
              return a.center.y() < b.center.y();
            });
  t.frame_range = {detections.front().frame, detections.back().frame};

  std::vector<FeatureVector> feats;
  feats.reserve(detections.size());
  for (const Detection& d : detections) {
    feats.push_back(d.feature);
  }
  t.feature = aggregate(feats);

  // Majority identity by detection count; ties to the smaller id. Unlabeled
  // members leave the label unset only when nothing is labeled.
  std::map<int, int> counts;
  for (const Detection& d : detections) {
    if (d.identity) {
      counts[*d.identity] += 1;
    }
  }
  if (!counts.empty()) {
    int best_id = counts.begin()->first;
    int best_n = counts.begin()->second;
    for (const auto& [id, n] : counts) {
      if (n > best_n) {
        best_id = id;
        best_n = n;
      }
    }
    t.label = best_id;
  }
  t.detections = std::move(detections);
  return t;
}

// ---------------------------------------------------------------------------
// Windowed agglomeration shared by the SCT and MCT stages.
// ---------------------------------------------------------------------------

// An association entity: a set of items (tracklets or trajectories) with the
// pooled feature, the majority label, and the sorted member time ranges used
// for feasibility checks.
struct Entity {
  std::uint64_t uid = 0;  // stable id for the pair-score cache
  std::vector<int> items;
  std::vector<FrameRange> ranges;   // sorted by start
  std::vector<int> range_camera;    // camera of each range
  FeatureVector feature_sum;        // sum of item features
  std::map<int, int> label_counts;  // label -> detection count

  FeatureVector pooled() const {
    return feature_sum / static_cast<double>(items.size());
  }

  std::optional<int> majority_label() const {
    if (label_counts.empty()) {
      return std::nullopt;
    }
    auto best = label_counts.begin();
    for (auto it = label_counts.begin(); it != label_counts.end(); ++it) {
      if (it->second > best->second) {
        best = it;
      }
    }
    return best->first;
  }

  int start() const { return ranges.front().start; }
};

enum class Stage { kSingleCamera, kCrossCamera };

struct AssociationParams {
  Stage stage = Stage::kSingleCamera;
  int window = 0;
  double stride_fraction = 0.5;
  const CameraTopology* topology = nullptr;  // cross-camera stage only
  double transition_slack = 3.0;
};

// Stale-gap pairs are discouraged, not forbidden: a pair two visits apart
// can still be transitively correct through the visits in between, and the
// solver's cluster sums let strong intermediate evidence outvote the
// penalty.
constexpr double kStaleGapPenalty = 2.0;

struct PairConstraint {
  bool overlap = false;    // hard: co-clustering is infeasible
  bool stale_gap = false;  // soft: subtract kStaleGapPenalty from the score
};

// Walks the union of both entities' member ranges in time order and checks
// every time-adjacent pair that crosses the two entities. Any overlap makes
// the merge infeasible (one camera cannot see a target twice at once, and
// camera views do not overlap). At the cross-camera stage, a time-adjacent
// pair on a known camera edge whose gap exceeds slack * mean transition
// marks the pair stale. Checking only adjacent cross pairs is complete for
// overlap detection because each entity's own ranges are disjoint.
PairConstraint evaluate_pair(const Entity& a, const Entity& b,
                             const AssociationParams& params) {
  struct Piece {
    FrameRange range;
    int camera;
    bool from_a;
  };
  std::vector<Piece> pieces;
  pieces.reserve(a.ranges.size() + b.ranges.size());
  for (std::size_t i = 0; i < a.ranges.size(); ++i) {
    pieces.push_back({a.ranges[i], a.range_camera[i], true});
  }
  for (std::size_t i = 0; i < b.ranges.size(); ++i) {
    pieces.push_back({b.ranges[i], b.range_camera[i], false});
  }
  std::sort(pieces.begin(), pieces.end(), [](const Piece& x, const Piece& y) {
    if (x.range.start != y.range.start) return x.range.start < y.range.start;
    return x.range.end < y.range.end;
  });

  PairConstraint out;
  for (std::size_t i = 0; i + 1 < pieces.size(); ++i) {
    const Piece& u = pieces[i];
    const Piece& v = pieces[i + 1];
    if (u.from_a == v.from_a) {
      continue;  // validated when its own entity formed
    }
    if (u.range.overlaps(v.range)) {
      out.overlap = true;
      return out;
    }
    if (params.stage == Stage::kCrossCamera && u.camera != v.camera &&
        params.topology) {
      if (auto t = params.topology->transition(u.camera, v.camera)) {
        const int gap = v.range.start - u.range.end;
        if (static_cast<double>(gap) > params.transition_slack * t->mean) {
          out.stale_gap = true;
        }
      }
    }
  }
  return out;
}

Entity merge_entities(const Entity& a, const Entity& b, std::uint64_t uid) {
  Entity out;
  out.uid = uid;
  out.items = a.items;
  out.items.insert(out.items.end(), b.items.begin(), b.items.end());
  out.feature_sum = a.feature_sum + b.feature_sum;
  out.label_counts = a.label_counts;
  for (const auto& [label, n] : b.label_counts) {
    out.label_counts[label] += n;
  }
  struct Tagged {
    FrameRange r;
    int cam;
  };
  std::vector<Tagged> tagged;
  tagged.reserve(a.ranges.size() + b.ranges.size());
  for (std::size_t i = 0; i < a.ranges.size(); ++i) {
    tagged.push_back({a.ranges[i], a.range_camera[i]});
  }
  for (std::size_t i = 0; i < b.ranges.size(); ++i) {
    tagged.push_back({b.ranges[i], b.range_camera[i]});
  }
  std::sort(tagged.begin(), tagged.end(), [](const Tagged& x, const Tagged& y) {
    if (x.r.start != y.r.start) return x.r.start < y.r.start;
    return x.r.end < y.r.end;
  });
  for (const Tagged& t : tagged) {
    out.ranges.push_back(t.r);
    out.range_camera.push_back(t.cam);
  }
  return out;
}

// Pair-score cache keyed by entity uids; entities are immutable once built.
class PairScoreCache {
 public:
  double score(const Entity& a, const Entity& b, const Scorer& scorer) {
    const std::uint64_t key = a.uid < b.uid
                                  ? (a.uid << 32) | b.uid
                                  : (b.uid << 32) | a.uid;
    auto it = cache_.find(key);
    if (it != cache_.end()) {
      return it->second;
    }
    const ScoreNode na{a.pooled(), a.majority_label()};
    const ScoreNode nb{b.pooled(), b.majority_label()};
    const double w = scorer(na, nb);
    if (!std::isfinite(w)) {
      throw std::runtime_error("scorer produced a non-finite similarity");
    }
    cache_.emplace(key, w);
    return w;
  }

 private:
  std::unordered_map<std::uint64_t, double> cache_;
};

// Sliding-window agglomeration over items with (start, feature, label,
// ranges). Items enter the optimization in the first window covering their
// start frame; all entities formed so far remain candidates. Returns the
// final entities in deterministic order.
std::vector<Entity> associate_windowed(std::vector<Entity> fresh,
                                       const Scorer& scorer,
                                       const AssociationParams& params) {
  std::vector<Entity> entities;
  if (fresh.empty()) {
    return entities;
  }
  std::sort(fresh.begin(), fresh.end(), [](const Entity& a, const Entity& b) {
    if (a.start() != b.start()) return a.start() < b.start();
    return a.uid < b.uid;
  });

  std::uint64_t next_uid = 0;
  for (Entity& e : fresh) {
    e.uid = next_uid++;
  }

  PairScoreCache cache;
  const int stride = std::max(
      1, static_cast<int>(std::lround(params.window * params.stride_fraction)));
  const int min_start = fresh.front().start();
  const int max_start = fresh.back().start();
  int window_start = (min_start / stride) * stride;
  if (window_start > min_start) {
    window_start -= stride;
  }

  std::size_t next_item = 0;
  while (next_item < fresh.size()) {
    const int window_end = window_start + params.window;  // exclusive
    std::vector<Entity> entering;
    while (next_item < fresh.size() && fresh[next_item].start() < window_end) {
      entering.push_back(fresh[next_item]);
      ++next_item;
    }
    window_start += stride;
    if (entering.empty()) {
      continue;
    }

    std::vector<Entity> candidates = std::move(entities);
    for (Entity& e : entering) {
      candidates.push_back(std::move(e));
    }

    const int n = static_cast<int>(candidates.size());
    SimilarityGraph graph(n);
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        const PairConstraint pc =
            evaluate_pair(candidates[static_cast<std::size_t>(i)],
                          candidates[static_cast<std::size_t>(j)], params);
        if (pc.overlap) {
          graph.forbid(i, j);
          continue;
        }
        double w = cache.score(candidates[static_cast<std::size_t>(i)],
                               candidates[static_cast<std::size_t>(j)],
                               scorer);
        if (pc.stale_gap) {
          w -= kStaleGapPenalty;
        }
        graph.set_weight(i, j, w);
      }
    }
    const Partition part = solve(graph);

    std::vector<Entity> merged(static_cast<std::size_t>(part.group_count()));
    std::vector<bool> filled(merged.size(), false);
    for (int i = 0; i < n; ++i) {
      const std::size_t g = static_cast<std::size_t>(part.assignment[i]);
      if (!filled[g]) {
        merged[g] = std::move(candidates[static_cast<std::size_t>(i)]);
        filled[g] = true;
      } else {
        merged[g] = merge_entities(merged[g], candidates[static_cast<std::size_t>(i)],
                                   next_uid++);
      }
    }
    entities = std::move(merged);
  }
  return entities;
}

}  // namespace

std::vector<Tracklet> ground_truth_tracklets(
    std::span<const Detection> detections, int tracklet_len) {
  if (tracklet_len < 1) {
    throw std::invalid_argument("tracklet_len must be positive");
  }
  std::map<std::tuple<int, int, int>, std::vector<Detection>> groups;
  for (const Detection& d : detections) {
    if (!d.identity) {
      throw std::invalid_argument(
          "ground-truth tracklets need labeled detections");
    }
    groups[{d.camera_id, d.frame / tracklet_len, *d.identity}].push_back(d);
  }
  std::vector<Tracklet> out;
  out.reserve(groups.size());
  for (auto& [key, dets] : groups) {
    out.push_back(make_tracklet(std::get<0>(key), std::move(dets)));
  }
  std::sort(out.begin(), out.end(), [](const Tracklet& a, const Tracklet& b) {
    if (a.camera_id != b.camera_id) return a.camera_id < b.camera_id;
    if (a.frame_range.start != b.frame_range.start)
      return a.frame_range.start < b.frame_range.start;
    return a.label.value_or(-1) < b.label.value_or(-1);
  });
  return out;
}

std::vector<Tracklet> form_tracklets(std::span<const Detection> detections,
                                     const PipelineConfig& cfg,
                                     const Scorer& appearance) {
  if (cfg.tracklet_len < 1) {
    throw std::invalid_argument("tracklet_len must be positive");
  }
  std::vector<Detection> sorted(detections.begin(), detections.end());
  std::sort(sorted.begin(), sorted.end(),
            [](const Detection& a, const Detection& b) {
              if (a.camera_id != b.camera_id) return a.camera_id < b.camera_id;
              if (a.frame != b.frame) return a.frame < b.frame;
              if (a.center.x() != b.center.x())
                return a.center.x() < b.center.x();
              return a.center.y() < b.center.y();
            });

  std::vector<Tracklet> out;
  std::size_t block_begin = 0;
  while (block_begin < sorted.size()) {
    const int camera = sorted[block_begin].camera_id;
    const int block = sorted[block_begin].frame / cfg.tracklet_len;
    std::size_t block_end = block_begin;
    while (block_end < sorted.size() &&
           sorted[block_end].camera_id == camera &&
           sorted[block_end].frame / cfg.tracklet_len == block) {
      ++block_end;
    }

    const int n = static_cast<int>(block_end - block_begin);
    SimilarityGraph graph(n);
    for (int i = 0; i < n; ++i) {
      const Detection& di = sorted[block_begin + static_cast<std::size_t>(i)];
      for (int j = i + 1; j < n; ++j) {
        const Detection& dj = sorted[block_begin + static_cast<std::size_t>(j)];
        const int frame_gap = std::abs(di.frame - dj.frame);
        const double displacement = (di.center - dj.center).norm();
        if (frame_gap == 0 ||
            displacement > cfg.motion_gate * static_cast<double>(frame_gap)) {
          graph.forbid(i, j);
          continue;
        }
        graph.set_weight(i, j, appearance(ScoreNode{di.feature, di.identity},
                                          ScoreNode{dj.feature, dj.identity}));
      }
    }
    const Partition part = solve(graph);

    std::vector<std::vector<Detection>> clusters(
        static_cast<std::size_t>(part.group_count()));
    for (int i = 0; i < n; ++i) {
      clusters[static_cast<std::size_t>(part.assignment[i])].push_back(
          sorted[block_begin + static_cast<std::size_t>(i)]);
    }
    for (auto& dets : clusters) {
      out.push_back(make_tracklet(camera, std::move(dets)));
    }
    block_begin = block_end;
  }

  std::stable_sort(out.begin(), out.end(),
                   [](const Tracklet& a, const Tracklet& b) {
                     if (a.camera_id != b.camera_id)
                       return a.camera_id < b.camera_id;
                     return a.frame_range.start < b.frame_range.start;
                   });
  return out;
}

namespace {

Entity entity_from_tracklet(const Tracklet& t, int item_index) {
  Entity e;
  e.items = {item_index};
  e.ranges = {t.frame_range};
  e.range_camera = {t.camera_id};
  e.feature_sum = t.feature;
  if (t.label) {
    e.label_counts[*t.label] = static_cast<int>(t.detections.size());
  }
  return e;
}

Entity entity_from_trajectory(const Trajectory& t, int item_index) {
  Entity e;
  e.items = {item_index};
  e.feature_sum = t.feature;
  for (const Tracklet& m : t.tracklets) {
    if (m.label) {
      e.label_counts[*m.label] += static_cast<int>(m.detections.size());
    }
  }
  // A trajectory occupies one camera over its whole span.
  e.ranges = {t.frame_range};
  e.range_camera = {t.camera_id};
  return e;
}

}  // namespace

std::vector<Trajectory> single_camera_tracking(
    std::span<const Tracklet> tracklets, const Scorer& scorer,
    const PipelineConfig& cfg) {
  if (tracklets.empty()) {
    return {};
  }
  const int camera = tracklets.front().camera_id;
  for (const Tracklet& t : tracklets) {
    if (t.camera_id != camera) {
      throw std::invalid_argument(
          "single-camera tracking got mixed cameras in one batch");
    }
  }

  std::vector<Entity> fresh;
  fresh.reserve(tracklets.size());
  for (std::size_t i = 0; i < tracklets.size(); ++i) {
    fresh.push_back(
        entity_from_tracklet(tracklets[i], static_cast<int>(i)));
  }

  AssociationParams params;
  params.stage = Stage::kSingleCamera;
  params.window = cfg.sct_window;
  params.stride_fraction = cfg.window_stride_fraction;
  std::vector<Entity> entities = associate_windowed(std::move(fresh), scorer,
                                                    params);

  std::vector<Trajectory> out;
  out.reserve(entities.size());
  for (const Entity& e : entities) {
    Trajectory traj;
    traj.camera_id = camera;
    std::vector<int> members = e.items;
    std::sort(members.begin(), members.end(), [&](int a, int b) {
      return tracklets[static_cast<std::size_t>(a)].frame_range.start <
             tracklets[static_cast<std::size_t>(b)].frame_range.start;
    });
    std::vector<FeatureVector> feats;
    feats.reserve(members.size());
    for (int m : members) {
      traj.tracklets.push_back(tracklets[static_cast<std::size_t>(m)]);
      feats.push_back(tracklets[static_cast<std::size_t>(m)].feature);
    }
    traj.feature = aggregate(feats);
    traj.frame_range = {traj.tracklets.front().frame_range.start,
                        traj.tracklets.back().frame_range.end};
    out.push_back(std::move(traj));
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const Trajectory& a, const Trajectory& b) {
                     return a.frame_range.start < b.frame_range.start;
                   });
  return out;
}

std::vector<Track> multi_camera_tracking(std::span<const Trajectory> trajectories,
                                         const Scorer& scorer,
                                         const CameraTopology& topology,
                                         const PipelineConfig& cfg) {
  if (trajectories.empty()) {
    return {};
  }

  std::vector<Entity> fresh;
  fresh.reserve(trajectories.size());
  for (std::size_t i = 0; i < trajectories.size(); ++i) {
    fresh.push_back(
        entity_from_trajectory(trajectories[i], static_cast<int>(i)));
  }

  AssociationParams params;
  params.stage = Stage::kCrossCamera;
  params.window = cfg.mct_window;
  params.stride_fraction = cfg.window_stride_fraction;
  params.topology = &topology;
  params.transition_slack = cfg.transition_slack;
  std::vector<Entity> entities = associate_windowed(std::move(fresh), scorer,
                                                    params);

  std::vector<Track> out;
  out.reserve(entities.size());
  for (const Entity& e : entities) {
    Track track;
    std::vector<int> members = e.items;
    std::sort(members.begin(), members.end(), [&](int a, int b) {
      const Trajectory& ta = trajectories[static_cast<std::size_t>(a)];
      const Trajectory& tb = trajectories[static_cast<std::size_t>(b)];
      if (ta.frame_range.start != tb.frame_range.start)
        return ta.frame_range.start < tb.frame_range.start;
      return ta.camera_id < tb.camera_id;
    });
    for (int m : members) {
      track.trajectories.push_back(trajectories[static_cast<std::size_t>(m)]);
    }
    out.push_back(std::move(track));
  }
  std::stable_sort(out.begin(), out.end(), [](const Track& a, const Track& b) {
    const FrameRange& ra = a.trajectories.front().frame_range;
    const FrameRange& rb = b.trajectories.front().frame_range;
    if (ra.start != rb.start) return ra.start < rb.start;
    return a.trajectories.front().camera_id < b.trajectories.front().camera_id;
  });
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i].global_id = static_cast<int>(i);
  }
  return out;
}

TrackingResult run(std::span<const Detection> detections,
                   const CameraTopology& topology,
                   const StageScorers& scorers, const PipelineConfig& cfg) {
  TrackingResult result;
  result.tracklets = form_tracklets(detections, cfg, scorers.tracklet);

  std::size_t begin = 0;
  while (begin < result.tracklets.size()) {
    const int camera = result.tracklets[begin].camera_id;
    std::size_t end = begin;
    while (end < result.tracklets.size() &&
           result.tracklets[end].camera_id == camera) {
      ++end;
    }
    std::span<const Tracklet> batch(result.tracklets.data() + begin,
                                    end - begin);
    std::vector<Trajectory> trajs =
        single_camera_tracking(batch, scorers.sct, cfg);
    for (Trajectory& t : trajs) {
      result.trajectories.push_back(std::move(t));
    }
    begin = end;
  }

  result.tracks = multi_camera_tracking(result.trajectories, scorers.mct,
                                        topology, cfg);
  return result;
}

TrackingResult run(const Scenario& scenario, const StageScorers& scorers,
                   const PipelineConfig& cfg) {
  return run(scenario.detections, scenario.topology, scorers, cfg);
}

}  // namespace mtmct
