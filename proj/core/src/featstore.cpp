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

#include "mtmct/featstore.hpp"

#include <stdexcept>

namespace mtmct {

DistanceStats::DistanceStats(double mu_p, double mu_n)
    : mu_p_(mu_p), mu_n_(mu_n) {
  if (!(mu_p >= 0.0)) {
    throw std::invalid_argument("mu_p must be non-negative");
  }
  if (!(mu_n > mu_p)) {
    throw std::invalid_argument("degenerate statistics: mu_n <= mu_p");
  }
  thres_ = (mu_n_ + mu_p_) / 2.0;
  norm_ = (mu_n_ - mu_p_) / 2.0;
}

FeatureVector aggregate(std::span<const FeatureVector> features) {
  if (features.empty()) {
    throw std::invalid_argument("empty feature list");
  }
  const Eigen::Index dim = features.front().size();
  FeatureVector sum = FeatureVector::Zero(dim);
  for (const FeatureVector& f : features) {
    if (f.size() != dim) {
      throw std::invalid_argument("feature dimension mismatch");
    }
    sum += f;
  }
  return sum / static_cast<double>(features.size());
}

double distance(const FeatureVector& a, const FeatureVector& b) {
  if (a.size() != b.size()) {
    throw std::invalid_argument("feature dimension mismatch");
  }
  return (a - b).norm();
}

DistanceStats compute_stats(std::span<const LabeledPair> pairs) {
  double pos_sum = 0.0, neg_sum = 0.0;
  std::size_t pos_n = 0, neg_n = 0;
  for (const LabeledPair& p : pairs) {
    const double d = distance(p.a, p.b);
    if (p.same_identity) {
      pos_sum += d;
      ++pos_n;
    } else {
      neg_sum += d;
      ++neg_n;
    }
  }
  if (pos_n == 0 || neg_n == 0) {
    throw std::invalid_argument(
        "need at least one positive and one negative pair");
  }
  return DistanceStats(pos_sum / static_cast<double>(pos_n),
                       neg_sum / static_cast<double>(neg_n));
}

double baseline_similarity(double dist, const DistanceStats& stats) {
  return (stats.thres() - dist) / stats.norm();
}

double baseline_similarity(const FeatureVector& a, const FeatureVector& b,
                           const DistanceStats& stats) {
  return baseline_similarity(distance(a, b), stats);
}

}  // namespace mtmct
