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

#include "mtmct/scorer.hpp"

#include <utility>

namespace mtmct {

Scorer make_baseline_scorer(DistanceStats stats) {
  return [stats](const ScoreNode& a, const ScoreNode& b) {
    return baseline_similarity(a.feature, b.feature, stats);
  };
}

Scorer make_metric_scorer(MetricNetwork net) {
  return [net = std::move(net)](const ScoreNode& a, const ScoreNode& b) {
    return similarity(net, a.feature, b.feature);
  };
}

Scorer make_oracle_scorer() {
  return [](const ScoreNode& a, const ScoreNode& b) {
    return (a.label && b.label && *a.label == *b.label) ? 1.0 : -1.0;
  };
}

Scorer make_constant_scorer(double value) {
  return [value](const ScoreNode&, const ScoreNode&) { return value; };
}

}  // namespace mtmct
