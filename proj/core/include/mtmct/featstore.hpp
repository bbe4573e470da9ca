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

#include "mtmct/types.hpp"

namespace mtmct {

/// Population statistics of the feature distance: mu_p is the mean distance
/// between same-identity pairs, mu_n between different-identity pairs. The
/// derived midpoint (thres) and half-gap (norm) center and scale the
/// distance-based similarity so that d = mu_p maps to +1 and d = mu_n to -1.
/// Construction enforces mu_p >= 0 and mu_n > mu_p; outside that regime the
/// score is meaningless and the constructor throws.
class DistanceStats {
 public:
  DistanceStats(double mu_p, double mu_n);

  double mu_p() const { return mu_p_; }
  double mu_n() const { return mu_n_; }
  double thres() const { return thres_; }
  double norm() const { return norm_; }

 private:
  double mu_p_ = 0.0;
  double mu_n_ = 0.0;
  double thres_ = 0.0;
  double norm_ = 0.0;
};

/// A feature pair labeled with ground-truth co-identity.
struct LabeledPair {
  FeatureVector a;
  FeatureVector b;
  bool same_identity = false;
};

/// Element-wise mean. Throws on an empty list or mismatched dimensions.
FeatureVector aggregate(std::span<const FeatureVector> features);

/// Euclidean distance. Throws on mismatched dimensions.
double distance(const FeatureVector& a, const FeatureVector& b);

/// Mean same-identity and different-identity distances over labeled pairs.
/// Requires at least one pair of each class and a positive gap between the
/// class means ("degenerate statistics" otherwise).
DistanceStats compute_stats(std::span<const LabeledPair> pairs);

/// Distance-based similarity: (thres - d) / norm. +1 at d = mu_p, 0 at the
/// midpoint, -1 at d = mu_n, strictly decreasing in d.
double baseline_similarity(double dist, const DistanceStats& stats);
double baseline_similarity(const FeatureVector& a, const FeatureVector& b,
                           const DistanceStats& stats);

}  // namespace mtmct
