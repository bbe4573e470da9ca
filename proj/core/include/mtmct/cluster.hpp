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
#include <cstdint>
#include <vector>

namespace mtmct {

/// Signed pairwise-similarity instance for one association window.
/// Weights are kept symmetric by the setter and the diagonal is never read.
/// Forbidden pairs are hard constraints: no solver output may place the two
/// nodes in the same group.
class SimilarityGraph {
 public:
  explicit SimilarityGraph(int n);

  int size() const { return n_; }

  void set_weight(int i, int j, double w);
  double weight(int i, int j) const { return weights_(i, j); }

  void forbid(int i, int j);
  bool forbidden(int i, int j) const {
    return forbid_[static_cast<std::size_t>(i) * n_ + j] != 0;
  }
  bool has_forbidden() const { return any_forbidden_; }

 private:
  void check_pair(int i, int j) const;

  int n_ = 0;
  Eigen::MatrixXd weights_;
  std::vector<std::uint8_t> forbid_;
  bool any_forbidden_ = false;
};

/// Node-to-group assignment. Group ids are contiguous from 0 in order of
/// first appearance, so equal partitions have equal assignment arrays.
struct Partition {
  std::vector<int> assignment;

  int group_count() const;
};

/// Relabels groups to first-appearance order (the canonical form used by
/// both solvers and by the tie-break rule).
Partition canonical_form(std::vector<int> raw);

/// Sum over unordered node pairs of x_ij * w_ij, where x_ij is +1 when the
/// pair shares a group and -1 otherwise. Transitivity is satisfied by
/// construction because the argument is a partition.
double objective(const SimilarityGraph& g, const Partition& p);

inline constexpr int kDefaultExactLimit = 10;

/// Exhaustive optimum over all set partitions, restricted-growth-string
/// enumeration in lexicographic order. Partitions that co-cluster a
/// forbidden pair are discarded. Ties resolve to the lexicographically
/// smallest assignment. Throws when n exceeds `exact_limit` (Bell numbers
/// grow too fast beyond ~10 nodes).
Partition solve_exact(const SimilarityGraph& g,
                      int exact_limit = kDefaultExactLimit);

/// Greedy agglomeration followed by single-node move local search.
///
/// Starting from singletons, repeatedly merge the cluster pair whose
/// inter-cluster weight sum is largest, while positive and not forbidden;
/// then sweep nodes in index order, applying the best strictly-improving
/// single-node move until a full sweep changes nothing. Deterministic given
/// the input: ties prefer the smallest cluster indices. If
/// `objective_trace` is non-null it receives the objective value after the
/// initial singleton state and after every accepted merge or move (a
/// non-decreasing sequence).
Partition solve_heuristic(const SimilarityGraph& g,
                          std::vector<double>* objective_trace = nullptr);

}  // namespace mtmct
