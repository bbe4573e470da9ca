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
#include <span>
#include <utility>
#include <vector>

#include "mtmct/pipeline.hpp"
#include "mtmct/scorer.hpp"
#include "mtmct/types.hpp"

namespace mtmct {

/// Identity-level precision/recall after an optimal one-to-one matching of
/// true ids to hypothesis ids. The counts are per-frame observations.
struct IdScores {
  std::int64_t idtp = 0;
  std::int64_t idfp = 0;
  std::int64_t idfn = 0;
  double idf1 = 0.0;
  double idp = 0.0;
  double idr = 0.0;
};

/// Computes the ID measures over one pooled set of records. A truth and a
/// hypothesis observation match in a frame when they share the camera and
/// their centers are within `match_radius`. The matching between ids is the
/// maximum-overlap one-to-one assignment (unmatched ids allowed).
///
/// Conventions: both sides empty -> all ratios 1; exactly one side empty ->
/// all ratios 0. Throws when the hypothesis mentions a camera absent from
/// the truth.
IdScores id_measures(std::span<const ObservationRecord> truth,
                     std::span<const ObservationRecord> hypothesis,
                     double match_radius);

/// Single-camera variant: ids are matched per camera and the counts pooled
/// before the ratios are derived (a hypothesis id lives inside one camera,
/// so cross-camera matching would be meaningless).
IdScores id_measures_per_camera(std::span<const ObservationRecord> truth,
                                std::span<const ObservationRecord> hypothesis,
                                double match_radius);

/// Record extraction: trajectories keyed by their index (single-camera
/// evaluation) and tracks keyed by global id (cross-camera evaluation).
std::vector<ObservationRecord> sct_records(const TrackingResult& result);
std::vector<ObservationRecord> mct_records(const TrackingResult& result);

/// Classifies each labeled pair with the decision rule "score > 0 means
/// same identity" and returns (false positive rate, false negative rate).
/// Requires at least one pair of each class.
std::pair<double, double> pair_error_rates(const Scorer& scorer,
                                           std::span<const LabeledPair> pairs);

}  // namespace mtmct
