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

#include <functional>
#include <optional>

#include "mtmct/featstore.hpp"
#include "mtmct/metricnet.hpp"
#include "mtmct/types.hpp"

namespace mtmct {

/// What a similarity scorer sees of an association candidate: its pooled
/// appearance feature, plus the ground-truth label when one is known (used
/// only by the oracle scorer in verification runs).
struct ScoreNode {
  FeatureVector feature;
  std::optional<int> label;
};

/// Symmetric pairwise similarity; positive means "same identity". Each
/// association level is configured with its own scorer.
using Scorer = std::function<double(const ScoreNode&, const ScoreNode&)>;

/// Distance-based score normalized by population statistics.
Scorer make_baseline_scorer(DistanceStats stats);

/// Learned pair-classifier score at the scoring temperature.
Scorer make_metric_scorer(MetricNetwork net);

/// +1 when both labels are present and equal, -1 otherwise. Verification
/// only; real runs never see labels.
Scorer make_oracle_scorer();

Scorer make_constant_scorer(double value);

}  // namespace mtmct
