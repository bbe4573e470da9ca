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

#include "mtmct/sampler.hpp"

#include <cmath>
#include <cstdlib>
#include <stdexcept>

#include "mtmct/rng.hpp"

namespace mtmct {

namespace {

enum class Mode { kIntra, kInter, kGlobal };

struct Index {
  std::vector<int> start;
  std::vector<int> camera;
  std::vector<int> label;
};

Index build_index(std::span<const Tracklet> tracklets) {
  Index idx;
  idx.start.reserve(tracklets.size());
  idx.camera.reserve(tracklets.size());
  idx.label.reserve(tracklets.size());
  for (const Tracklet& t : tracklets) {
    if (!t.label) {
      throw std::invalid_argument(
          "sampler requires ground-truth labels on every tracklet");
    }
    if (t.feature.size() == 0) {
      throw std::invalid_argument("tracklet without aggregated feature");
    }
    idx.start.push_back(t.frame_range.start);
    idx.camera.push_back(t.camera_id);
    idx.label.push_back(*t.label);
  }
  return idx;
}

struct Eligibility {
  Mode mode;
  int window = 0;  // tau_s or tau_m; ignored in global mode
  const CameraTopology* topology = nullptr;
  bool strict_neighbors = false;

  bool pair_ok(const Index& idx, int a, int b, bool positive) const {
    if (a == b) {
      return false;
    }
    if (mode != Mode::kGlobal &&
        std::abs(idx.start[a] - idx.start[b]) > window) {
      return false;
    }
    if (mode == Mode::kIntra && idx.camera[a] != idx.camera[b]) {
      return false;
    }
    if (positive) {
      if (idx.label[a] != idx.label[b]) {
        return false;
      }
      if (mode == Mode::kInter) {
        if (idx.camera[a] == idx.camera[b]) {
          return false;
        }
        if (strict_neighbors && topology &&
            !topology->has_edge(idx.camera[a], idx.camera[b])) {
          return false;
        }
      }
      return true;
    }
    return idx.label[a] != idx.label[b];
  }
};

std::vector<PairSample> draw_pairs(std::span<const Tracklet> tracklets,
                                   const Eligibility& rules,
                                   const SamplerConfig& cfg) {
  const Index idx = build_index(tracklets);
  const int n = static_cast<int>(tracklets.size());

  std::vector<int> anchors_pos, anchors_neg;
  for (int a = 0; a < n; ++a) {
    bool has_pos = false, has_neg = false;
    for (int b = 0; b < n && !(has_pos && has_neg); ++b) {
      has_pos = has_pos || rules.pair_ok(idx, a, b, true);
      has_neg = has_neg || rules.pair_ok(idx, a, b, false);
    }
    if (has_pos) {
      anchors_pos.push_back(a);
    }
    if (has_neg) {
      anchors_neg.push_back(a);
    }
  }

  if (anchors_pos.empty()) {
    if (rules.mode == Mode::kInter) {
      throw std::invalid_argument(
          "no cross-camera positives: no identity appears in two cameras "
          "within the sampling window");
    }
    throw std::invalid_argument("insufficient diversity: no positive pairs");
  }
  if (anchors_neg.empty()) {
    throw std::invalid_argument("insufficient diversity: no negative pairs");
  }

  const int total = (cfg.pairs_requested / 2) * 2;
  int pos_budget = total / 2;
  int neg_budget = total / 2;

  Rng rng(cfg.seed);
  std::vector<PairSample> out;
  out.reserve(static_cast<std::size_t>(total));
  std::vector<int> partners;

  while (pos_budget + neg_budget > 0) {
    bool positive;
    if (pos_budget > 0 && neg_budget > 0) {
      positive = rng.bernoulli(0.5);
    } else {
      positive = pos_budget > 0;
    }
    const auto& anchors = positive ? anchors_pos : anchors_neg;
    const int a = anchors[rng.uniform_index(anchors.size())];

    partners.clear();
    for (int b = 0; b < n; ++b) {
      if (rules.pair_ok(idx, a, b, positive)) {
        partners.push_back(b);
      }
    }
    const int b = partners[rng.uniform_index(partners.size())];

    PairSample sample;
    sample.diff = (tracklets[static_cast<std::size_t>(a)].feature -
                   tracklets[static_cast<std::size_t>(b)].feature)
                      .cwiseAbs();
    sample.positive = positive;
    sample.meta = PairMeta{idx.camera[a], idx.camera[b], idx.start[a],
                           idx.start[b]};
    out.push_back(std::move(sample));
    (positive ? pos_budget : neg_budget) -= 1;
  }
  return out;
}

}  // namespace

std::vector<PairSample> sample_intra(std::span<const Tracklet> tracklets,
                                     const SamplerConfig& cfg) {
  if (cfg.tau_s <= 0) {
    throw std::invalid_argument("tau_s must be positive");
  }
  Eligibility rules;
  rules.mode = Mode::kIntra;
  rules.window = cfg.tau_s;
  return draw_pairs(tracklets, rules, cfg);
}

std::vector<PairSample> sample_inter(std::span<const Tracklet> tracklets,
                                     const CameraTopology& topology,
                                     const SamplerConfig& cfg) {
  if (cfg.tau_m <= 0) {
    throw std::invalid_argument("tau_m must be positive");
  }
  Eligibility rules;
  rules.mode = Mode::kInter;
  rules.window = cfg.tau_m;
  rules.topology = &topology;
  rules.strict_neighbors = cfg.strict_neighbors;
  return draw_pairs(tracklets, rules, cfg);
}

std::vector<PairSample> sample_global(std::span<const Tracklet> tracklets,
                                      const SamplerConfig& cfg) {
  Eligibility rules;
  rules.mode = Mode::kGlobal;
  return draw_pairs(tracklets, rules, cfg);
}

DistanceStats compute_stats_from_samples(
    std::span<const PairSample> samples) {
  double pos_sum = 0.0, neg_sum = 0.0;
  std::size_t pos_n = 0, neg_n = 0;
  for (const PairSample& s : samples) {
    const double d = s.diff.norm();
    if (s.positive) {
      pos_sum += d;
      ++pos_n;
    } else {
      neg_sum += d;
      ++neg_n;
    }
  }
  if (pos_n == 0 || neg_n == 0) {
    throw std::invalid_argument(
        "need at least one positive and one negative sample");
  }
  return DistanceStats(pos_sum / static_cast<double>(pos_n),
                       neg_sum / static_cast<double>(neg_n));
}

}  // namespace mtmct
