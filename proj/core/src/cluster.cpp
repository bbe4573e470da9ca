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

#include "mtmct/cluster.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace mtmct {

SimilarityGraph::SimilarityGraph(int n) : n_(n) {
  if (n < 0) {
    throw std::invalid_argument("node count must be non-negative");
  }
  weights_ = Eigen::MatrixXd::Zero(n, n);
  forbid_.assign(static_cast<std::size_t>(n) * n, 0);
}

void SimilarityGraph::check_pair(int i, int j) const {
  if (i < 0 || j < 0 || i >= n_ || j >= n_ || i == j) {
    throw std::invalid_argument("invalid node pair");
  }
}

void SimilarityGraph::set_weight(int i, int j, double w) {
  check_pair(i, j);
  if (!std::isfinite(w)) {
    throw std::invalid_argument("weight must be finite");
  }
  weights_(i, j) = w;
  weights_(j, i) = w;
}

void SimilarityGraph::forbid(int i, int j) {
  check_pair(i, j);
  forbid_[static_cast<std::size_t>(i) * n_ + j] = 1;
  forbid_[static_cast<std::size_t>(j) * n_ + i] = 1;
  any_forbidden_ = true;
}

int Partition::group_count() const {
  int m = 0;
  for (int g : assignment) {
    m = std::max(m, g + 1);
  }
  return m;
}

Partition canonical_form(std::vector<int> raw) {
  std::vector<int> remap(raw.size(), -1);
  int next = 0;
  for (int& g : raw) {
    if (g < 0 || static_cast<std::size_t>(g) >= remap.size()) {
      throw std::invalid_argument("group id out of range");
    }
    if (remap[g] < 0) {
      remap[g] = next++;
    }
    g = remap[g];
  }
  return Partition{std::move(raw)};
}

double objective(const SimilarityGraph& g, const Partition& p) {
  if (static_cast<int>(p.assignment.size()) != g.size()) {
    throw std::invalid_argument("partition size does not match graph");
  }
  double total = 0.0;
  for (int i = 0; i < g.size(); ++i) {
    for (int j = i + 1; j < g.size(); ++j) {
      const double x = p.assignment[i] == p.assignment[j] ? 1.0 : -1.0;
      total += x * g.weight(i, j);
    }
  }
  return total;
}

Partition solve_exact(const SimilarityGraph& g, int exact_limit) {
  const int n = g.size();
  if (n > exact_limit) {
    throw std::invalid_argument("instance too large for exact solver (n=" +
                                std::to_string(n) + ")");
  }
  if (n == 0) {
    return Partition{};
  }

  std::vector<int> assign(n, 0);
  std::vector<int> best;
  double best_obj = 0.0;
  bool have_best = false;

  // Depth-first over restricted growth strings: node `idx` may join any
  // existing group or open a new one. Branches that would co-cluster a
  // forbidden pair are pruned. The enumeration order is lexicographic, so
  // keeping the first strict improvement yields the lexicographically
  // smallest optimum.
  auto recurse = [&](auto&& self, int idx, int groups_used,
                     double partial) -> void {
    if (idx == n) {
      if (!have_best || partial > best_obj) {
        have_best = true;
        best_obj = partial;
        best = assign;
      }
      return;
    }
    for (int grp = 0; grp <= groups_used; ++grp) {
      double delta = 0.0;
      bool feasible = true;
      for (int j = 0; j < idx; ++j) {
        const bool together = assign[j] == grp;
        if (together && g.forbidden(idx, j)) {
          feasible = false;
          break;
        }
        delta += (together ? 1.0 : -1.0) * g.weight(idx, j);
      }
      if (!feasible) {
        continue;
      }
      assign[idx] = grp;
      self(self, idx + 1, grp == groups_used ? groups_used + 1 : groups_used,
           partial + delta);
    }
  };
  recurse(recurse, 0, 0, 0.0);

  return Partition{std::move(best)};
}

namespace {

// Cluster bookkeeping for the greedy phase: `sum(c, d)` is the total weight
// across the cluster pair, `blocked(c, d)` marks pairs with at least one
// forbidden node pair between them.
struct ClusterState {
  explicit ClusterState(const SimilarityGraph& g)
      : n(g.size()),
        alive(n, true),
        node_cluster(n),
        members(n),
        sum(Eigen::MatrixXd::Zero(n, n)),
        blocked(static_cast<std::size_t>(n) * n, 0) {
    for (int i = 0; i < n; ++i) {
      node_cluster[i] = i;
      members[i] = {i};
    }
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        sum(i, j) = sum(j, i) = g.weight(i, j);
        if (g.forbidden(i, j)) {
          blocked[static_cast<std::size_t>(i) * n + j] = 1;
          blocked[static_cast<std::size_t>(j) * n + i] = 1;
        }
      }
    }
  }

  bool is_blocked(int c, int d) const {
    return blocked[static_cast<std::size_t>(c) * n + d] != 0;
  }

  // Merge cluster d into cluster c (c keeps its index).
  void merge(int c, int d) {
    for (int v : members[d]) {
      node_cluster[v] = c;
    }
    members[c].insert(members[c].end(), members[d].begin(), members[d].end());
    members[d].clear();
    alive[d] = false;
    for (int e = 0; e < n; ++e) {
      if (!alive[e] || e == c) {
        continue;
      }
      sum(c, e) += sum(d, e);
      sum(e, c) = sum(c, e);
      if (is_blocked(d, e)) {
        blocked[static_cast<std::size_t>(c) * n + e] = 1;
        blocked[static_cast<std::size_t>(e) * n + c] = 1;
      }
    }
  }

  int n;
  std::vector<bool> alive;
  std::vector<int> node_cluster;
  std::vector<std::vector<int>> members;
  Eigen::MatrixXd sum;
  std::vector<std::uint8_t> blocked;
};

}  // namespace

Partition solve_heuristic(const SimilarityGraph& g,
                          std::vector<double>* objective_trace) {
  const int n = g.size();
  if (n == 0) {
    return Partition{};
  }

  ClusterState state(g);

  double obj = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      obj -= g.weight(i, j);  // all-singleton start
    }
  }
  if (objective_trace) {
    objective_trace->clear();
    objective_trace->push_back(obj);
  }

  // Greedy agglomeration. Merging clusters c and d flips the sign of every
  // cross pair, so the gain is 2 * sum(c, d); we merge the largest positive
  // sum first, ties to the smallest (c, d).
  while (true) {
    int best_c = -1, best_d = -1;
    double best_sum = 0.0;
    for (int c = 0; c < n; ++c) {
      if (!state.alive[c]) {
        continue;
      }
      for (int d = c + 1; d < n; ++d) {
        if (!state.alive[d] || state.is_blocked(c, d)) {
          continue;
        }
        if (state.sum(c, d) > best_sum) {
          best_sum = state.sum(c, d);
          best_c = c;
          best_d = d;
        }
      }
    }
    if (best_c < 0) {
      break;
    }
    obj += 2.0 * best_sum;
    state.merge(best_c, best_d);
    if (objective_trace) {
      objective_trace->push_back(obj);
    }
  }

  // Single-node move local search to a fixed point. Moving v from cluster C
  // to cluster D changes the objective by 2 * (S(v, D) - S(v, C \ {v}));
  // D may be an empty (dead) cluster slot, which re-opens v as a singleton.
  std::vector<double> node_to_cluster(n, 0.0);
  bool moved = true;
  while (moved) {
    moved = false;
    for (int v = 0; v < n; ++v) {
      const int cur = state.node_cluster[v];
      std::fill(node_to_cluster.begin(), node_to_cluster.end(), 0.0);
      for (int u = 0; u < n; ++u) {
        if (u != v) {
          node_to_cluster[state.node_cluster[u]] += g.weight(v, u);
        }
      }
      const double stay = node_to_cluster[cur];

      int best_target = -1;
      double best_gain = 0.0;
      int singleton_slot = -1;
      for (int d = 0; d < n; ++d) {
        if (!state.alive[d]) {
          if (singleton_slot < 0) {
            singleton_slot = d;
          }
          continue;
        }
        if (d == cur) {
          continue;
        }
        bool ok = true;
        for (int u : state.members[d]) {
          if (g.forbidden(v, u)) {
            ok = false;
            break;
          }
        }
        if (!ok) {
          continue;
        }
        const double gain = 2.0 * (node_to_cluster[d] - stay);
        if (gain > best_gain) {
          best_gain = gain;
          best_target = d;
        }
      }
      // Leaving for a fresh singleton is worthwhile when v's ties to its
      // own cluster are negative.
      if (state.members[cur].size() > 1 && singleton_slot >= 0) {
        const double gain = 2.0 * (0.0 - stay);
        if (gain > best_gain) {
          best_gain = gain;
          best_target = singleton_slot;
        }
      }
      if (best_target < 0) {
        continue;
      }

      auto& from = state.members[cur];
      from.erase(std::find(from.begin(), from.end(), v));
      if (!state.alive[best_target]) {
        state.alive[best_target] = true;
      }
      state.members[best_target].push_back(v);
      state.node_cluster[v] = best_target;
      if (from.empty()) {
        state.alive[cur] = false;
      }
      // Pair sums are only used by the greedy phase; the move phase works
      // from node_cluster directly, but blocked flags must follow the two
      // touched clusters.
      for (int c : {cur, best_target}) {
        if (!state.alive[c]) {
          continue;
        }
        for (int e = 0; e < n; ++e) {
          if (!state.alive[e] || e == c) {
            continue;
          }
          std::uint8_t flag = 0;
          for (int a : state.members[c]) {
            for (int b : state.members[e]) {
              if (g.forbidden(a, b)) {
                flag = 1;
                break;
              }
            }
            if (flag) {
              break;
            }
          }
          state.blocked[static_cast<std::size_t>(c) * n + e] = flag;
          state.blocked[static_cast<std::size_t>(e) * n + c] = flag;
        }
      }
      obj += best_gain;
      if (objective_trace) {
        objective_trace->push_back(obj);
      }
      moved = true;
    }
  }

  return canonical_form(state.node_cluster);
}

}  // namespace mtmct
