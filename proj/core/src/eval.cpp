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

#include "mtmct/eval.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <set>
#include <stdexcept>

namespace mtmct {

namespace {

// O(n^3) min-cost assignment on a square matrix (Hungarian algorithm with
// potentials). Returns the column assigned to each row.
std::vector<int> min_cost_assignment(const std::vector<std::vector<double>>& cost) {
  const int n = static_cast<int>(cost.size());
  if (n == 0) {
    return {};
  }
  const double kInf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<int> p(n + 1, 0), way(n + 1, 0);
  for (int i = 1; i <= n; ++i) {
    p[0] = i;
    int j0 = 0;
    std::vector<double> minv(n + 1, kInf);
    std::vector<bool> used(n + 1, false);
    do {
      used[j0] = true;
      const int i0 = p[j0];
      double delta = kInf;
      int j1 = -1;
      for (int j = 1; j <= n; ++j) {
        if (used[j]) {
          continue;
        }
        const double cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const int j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0);
  }
  std::vector<int> row_to_col(n, -1);
  for (int j = 1; j <= n; ++j) {
    if (p[j] > 0) {
      row_to_col[p[j] - 1] = j - 1;
    }
  }
  return row_to_col;
}

IdScores scores_from_counts(std::int64_t idtp, std::int64_t idfp,
                            std::int64_t idfn, bool both_empty) {
  IdScores s;
  s.idtp = idtp;
  s.idfp = idfp;
  s.idfn = idfn;
  if (both_empty) {
    s.idf1 = s.idp = s.idr = 1.0;
    return s;
  }
  const std::int64_t f1_den = 2 * idtp + idfp + idfn;
  s.idf1 = f1_den > 0 ? 2.0 * static_cast<double>(idtp) /
                            static_cast<double>(f1_den)
                      : 0.0;
  s.idp = (idtp + idfp) > 0 ? static_cast<double>(idtp) /
                                  static_cast<double>(idtp + idfp)
                            : 0.0;
  s.idr = (idtp + idfn) > 0 ? static_cast<double>(idtp) /
                                  static_cast<double>(idtp + idfn)
                            : 0.0;
  return s;
}

// Overlap counting plus the optimal assignment for one record pool.
IdScores measure_pool(std::span<const ObservationRecord> truth,
                      std::span<const ObservationRecord> hypothesis,
                      double match_radius) {
  if (truth.empty() && hypothesis.empty()) {
    return scores_from_counts(0, 0, 0, true);
  }
  if (truth.empty() || hypothesis.empty()) {
    return scores_from_counts(0, static_cast<std::int64_t>(hypothesis.size()),
                              static_cast<std::int64_t>(truth.size()), false);
  }

  std::map<int, int> truth_ids, hyp_ids;
  for (const ObservationRecord& r : truth) {
    truth_ids.emplace(r.id, static_cast<int>(truth_ids.size()));
  }
  for (const ObservationRecord& r : hypothesis) {
    hyp_ids.emplace(r.id, static_cast<int>(hyp_ids.size()));
  }
  const int nt = static_cast<int>(truth_ids.size());
  const int nh = static_cast<int>(hyp_ids.size());

  // Per-(camera, frame) buckets; a truth/hypothesis observation pair in the
  // same bucket within the radius contributes one frame of overlap.
  std::map<std::pair<int, int>, std::vector<const ObservationRecord*>> buckets;
  for (const ObservationRecord& r : truth) {
    buckets[{r.camera_id, r.frame}].push_back(&r);
  }
  std::vector<std::vector<std::int64_t>> overlap(
      static_cast<std::size_t>(nt), std::vector<std::int64_t>(nh, 0));
  for (const ObservationRecord& h : hypothesis) {
    auto it = buckets.find({h.camera_id, h.frame});
    if (it == buckets.end()) {
      continue;
    }
    for (const ObservationRecord* t : it->second) {
      if ((t->center - h.center).norm() <= match_radius) {
        overlap[static_cast<std::size_t>(truth_ids.at(t->id))]
               [static_cast<std::size_t>(hyp_ids.at(h.id))] += 1;
      }
    }
  }

  // Pad to square and minimize negated overlap; the padding rows/columns
  // represent unmatched ids with zero overlap.
  const int n = std::max(nt, nh);
  std::vector<std::vector<double>> cost(
      static_cast<std::size_t>(n), std::vector<double>(n, 0.0));
  for (int i = 0; i < nt; ++i) {
    for (int j = 0; j < nh; ++j) {
      cost[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
          -static_cast<double>(overlap[static_cast<std::size_t>(i)]
                                      [static_cast<std::size_t>(j)]);
    }
  }
  const std::vector<int> assignment = min_cost_assignment(cost);

  std::int64_t idtp = 0;
  for (int i = 0; i < nt; ++i) {
    const int j = assignment[static_cast<std::size_t>(i)];
    if (j >= 0 && j < nh) {
      idtp += overlap[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    }
  }
  const std::int64_t idfp = static_cast<std::int64_t>(hypothesis.size()) - idtp;
  const std::int64_t idfn = static_cast<std::int64_t>(truth.size()) - idtp;
  return scores_from_counts(idtp, idfp, idfn, false);
}

void check_cameras(std::span<const ObservationRecord> truth,
                   std::span<const ObservationRecord> hypothesis) {
  if (truth.empty() || hypothesis.empty()) {
    return;
  }
  std::set<int> truth_cams;
  for (const ObservationRecord& r : truth) {
    truth_cams.insert(r.camera_id);
  }
  for (const ObservationRecord& r : hypothesis) {
    if (truth_cams.count(r.camera_id) == 0) {
      throw std::invalid_argument(
          "camera-set mismatch: hypothesis camera " +
          std::to_string(r.camera_id) + " absent from the truth");
    }
  }
}

}  // namespace

IdScores id_measures(std::span<const ObservationRecord> truth,
                     std::span<const ObservationRecord> hypothesis,
                     double match_radius) {
  check_cameras(truth, hypothesis);
  return measure_pool(truth, hypothesis, match_radius);
}

IdScores id_measures_per_camera(std::span<const ObservationRecord> truth,
                                std::span<const ObservationRecord> hypothesis,
                                double match_radius) {
  check_cameras(truth, hypothesis);
  if (truth.empty() && hypothesis.empty()) {
    return scores_from_counts(0, 0, 0, true);
  }

  std::set<int> cameras;
  for (const ObservationRecord& r : truth) {
    cameras.insert(r.camera_id);
  }
  for (const ObservationRecord& r : hypothesis) {
    cameras.insert(r.camera_id);
  }

  std::int64_t idtp = 0, idfp = 0, idfn = 0;
  for (int cam : cameras) {
    std::vector<ObservationRecord> t, h;
    for (const ObservationRecord& r : truth) {
      if (r.camera_id == cam) {
        t.push_back(r);
      }
    }
    for (const ObservationRecord& r : hypothesis) {
      if (r.camera_id == cam) {
        h.push_back(r);
      }
    }
    const IdScores s = measure_pool(t, h, match_radius);
    idtp += s.idtp;
    idfp += s.idfp;
    idfn += s.idfn;
  }
  return scores_from_counts(idtp, idfp, idfn, false);
}

std::vector<ObservationRecord> sct_records(const TrackingResult& result) {
  std::vector<ObservationRecord> out;
  for (std::size_t i = 0; i < result.trajectories.size(); ++i) {
    for (const Tracklet& t : result.trajectories[i].tracklets) {
      for (const Detection& d : t.detections) {
        out.push_back(ObservationRecord{d.camera_id, d.frame,
                                        static_cast<int>(i), d.center});
      }
    }
  }
  return out;
}

std::vector<ObservationRecord> mct_records(const TrackingResult& result) {
  std::vector<ObservationRecord> out;
  for (const Track& track : result.tracks) {
    for (const Trajectory& traj : track.trajectories) {
      for (const Tracklet& t : traj.tracklets) {
        for (const Detection& d : t.detections) {
          out.push_back(ObservationRecord{d.camera_id, d.frame,
                                          track.global_id, d.center});
        }
      }
    }
  }
  return out;
}

std::pair<double, double> pair_error_rates(const Scorer& scorer,
                                           std::span<const LabeledPair> pairs) {
  std::int64_t fp = 0, tn = 0, fn = 0, tp = 0;
  for (const LabeledPair& p : pairs) {
    // Give the oracle scorer labels consistent with the pair's class; real
    // scorers ignore them.
    const ScoreNode a{p.a, 0};
    const ScoreNode b{p.b, p.same_identity ? 0 : 1};
    const bool predicted_same = scorer(a, b) > 0.0;
    if (p.same_identity) {
      (predicted_same ? tp : fn) += 1;
    } else {
      (predicted_same ? fp : tn) += 1;
    }
  }
  if (tp + fn == 0 || fp + tn == 0) {
    throw std::invalid_argument(
        "need at least one positive and one negative pair");
  }
  return {static_cast<double>(fp) / static_cast<double>(fp + tn),
          static_cast<double>(fn) / static_cast<double>(fn + tp)};
}

}  // namespace mtmct
