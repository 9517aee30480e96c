// SPDX-License-Identifier: Apache-2.0
#include "volcap/mocap/track.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace volcap::mocap {
namespace {

struct Grouping {
  std::vector<int> upper, lower;
};

// Split extremities by which pairs' tree paths pass through the torso
// node: such pairs sit on opposite sides, a 2-coloring. Falls back to
// height when the relation is inconsistent.
Grouping split_groups(const SkeletonGraph& graph, const std::vector<int>& leaves, int torso_node,
                      const Vec3& up) {
  const int n = static_cast<int>(leaves.size());
  std::vector<std::vector<int>> opposite(n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const auto path = graph.path(leaves[i], leaves[j]);
      if (std::find(path.begin(), path.end(), torso_node) != path.end()) {
        opposite[i].push_back(j);
        opposite[j].push_back(i);
      }
    }

  std::vector<int> color(n, -1);
  bool consistent = true;
  for (int start = 0; start < n && consistent; ++start) {
    if (color[start] != -1) continue;
    color[start] = 0;
    std::vector<int> stack{start};
    while (!stack.empty() && consistent) {
      const int cur = stack.back();
      stack.pop_back();
      for (int other : opposite[cur]) {
        if (color[other] == -1) {
          color[other] = 1 - color[cur];
          stack.push_back(other);
        } else if (color[other] == color[cur]) {
          consistent = false;
        }
      }
    }
  }

  Grouping g;
  if (consistent) {
    std::vector<int> class0, class1;
    for (int i = 0; i < n; ++i) (color[i] == 0 ? class0 : class1).push_back(leaves[i]);
    if (class0.size() == 2 || class1.size() == 2) {
      auto& lower = class0.size() == 2 ? class0 : class1;
      auto& upper = class0.size() == 2 ? class1 : class0;
      // sanity: the pair class should sit lower along the up axis
      double mean_lower = 0, mean_upper = 0;
      for (int i : lower) mean_lower += graph.nodes[i].dot(up) / lower.size();
      for (int i : upper) mean_upper += graph.nodes[i].dot(up) / upper.size();
      if (mean_lower <= mean_upper) {
        g.lower = lower;
        g.upper = upper;
        return g;
      }
      g.lower = upper;
      g.upper = lower;
      return g;
    }
  }

  // fallback: two lowest leaves along the up axis are the ankles
  std::vector<int> sorted = leaves;
  std::sort(sorted.begin(), sorted.end(), [&](int a, int b) {
    const double ya = graph.nodes[a].dot(up), yb = graph.nodes[b].dot(up);
    return ya != yb ? ya < yb : a < b;
  });
  g.lower.assign(sorted.begin(), sorted.begin() + std::min<std::size_t>(2, sorted.size()));
  g.upper.assign(sorted.begin() + g.lower.size(), sorted.end());
  return g;
}

// leaves reachable from the torso (tracking uses the torso's component)
std::vector<int> component_leaves(const SkeletonGraph& graph, int torso_node) {
  const auto dist = graph.geodesics_from(torso_node);
  std::vector<int> out;
  for (int leaf : graph.leaves)
    if (!std::isinf(dist[leaf])) out.push_back(leaf);
  return out;
}

std::optional<ExtremityLabels> label_five(const SkeletonGraph& graph,
                                          const std::vector<int>& leaves, int torso_node,
                                          const Vec3& up) {
  if (leaves.size() != 5) return std::nullopt;
  const Grouping groups = split_groups(graph, leaves, torso_node, up);
  if (groups.lower.size() != 2 || groups.upper.size() != 3) return std::nullopt;

  const auto dist = graph.geodesics_from(torso_node);
  ExtremityLabels out;
  out.ankles = {groups.lower[0], groups.lower[1]};
  int head = groups.upper[0];
  for (int candidate : groups.upper)
    if (dist[candidate] < dist[head]) head = candidate;
  out.head = head;
  int w = 0;
  for (int candidate : groups.upper)
    if (candidate != head) out.wrists[w++] = candidate;
  return out;
}

}  // namespace

std::optional<ExtremityLabels> detect_extremities(const SkeletonGraph& graph, int torso_node,
                                                  const Vec3& up,
                                                  const BodyCalibration* calibration) {
  std::vector<int> leaves = component_leaves(graph, torso_node);
  if (leaves.size() < 2) return std::nullopt;

  if (leaves.size() == 5) return label_five(graph, leaves, torso_node, up);

  if (leaves.size() < 5) {
    // stacked body parts: label the two lowest leaves as ankles, subtract
    // their paths to the torso, and look for the revealed upper leaves
    std::vector<int> sorted = leaves;
    std::sort(sorted.begin(), sorted.end(), [&](int a, int b) {
      const double ya = graph.nodes[a].dot(up), yb = graph.nodes[b].dot(up);
      return ya != yb ? ya < yb : a < b;
    });
    if (sorted.size() < 2) return std::nullopt;
    ExtremityLabels out;
    out.ankles = {sorted[0], sorted[1]};

    std::set<int> removed;
    for (int ankle : out.ankles)
      for (int node : graph.path(ankle, torso_node)) removed.insert(node);

    // leaves of the induced forest T_up
    std::vector<int> degree(graph.nodes.size(), 0);
    for (const auto& e : graph.mst_edges)
      if (!removed.count(e.a) && !removed.count(e.b)) {
        ++degree[e.a];
        ++degree[e.b];
      }
    std::vector<int> upper;
    for (std::size_t i = 0; i < graph.nodes.size(); ++i)
      if (!removed.count(static_cast<int>(i)) && degree[i] == 1)
        upper.push_back(static_cast<int>(i));
    if (upper.size() != 3) return std::nullopt;

    const auto dist = graph.geodesics_from(torso_node);
    int head = upper[0];
    for (int candidate : upper)
      if (dist[candidate] < dist[head]) head = candidate;
    out.head = head;
    int w = 0;
    for (int candidate : upper)
      if (candidate != head) out.wrists[w++] = candidate;
    return out;
  }

  // spurious extra limbs: keep the five whose torso geodesics best match
  // the calibrated lengths (minimal absolute difference assignment)
  if (!calibration) return std::nullopt;
  const auto dist = graph.geodesics_from(torso_node);
  const auto target = calibration->extremity_geodesics();

  std::vector<int> best_pick;
  double best_cost = std::numeric_limits<double>::infinity();
  const int n = static_cast<int>(leaves.size());
  std::vector<int> role_of(5);
  std::vector<int> selector(n, 0);
  std::fill(selector.end() - 5, selector.end(), 1);
  std::sort(selector.begin(), selector.end());
  // iterate 5-subsets via the sorted selector mask, then permutations
  std::vector<int> subset;
  do {
    subset.clear();
    for (int i = 0; i < n; ++i)
      if (selector[i]) subset.push_back(leaves[i]);
    std::vector<int> perm = subset;
    std::sort(perm.begin(), perm.end());
    do {
      double cost = 0;
      for (int r = 0; r < 5; ++r) cost += std::abs(dist[perm[r]] - target[r]);
      if (cost < best_cost) {
        best_cost = cost;
        best_pick = perm;
      }
    } while (std::next_permutation(perm.begin(), perm.end()));
  } while (std::next_permutation(selector.begin(), selector.end()));

  if (best_pick.empty()) return std::nullopt;
  return label_five(graph, best_pick, torso_node, up);
}

SpinePath extract_spine(const SkeletonGraph& graph, const ExtremityLabels& extremities,
                        int torso_node) {
  const std::vector<int> all = {extremities.head, extremities.wrists[0], extremities.wrists[1],
                                extremities.ankles[0], extremities.ankles[1]};
  SpinePath out;
  std::vector<std::vector<int>> through;  // B paths
  for (std::size_t i = 0; i < all.size(); ++i)
    for (std::size_t j = i + 1; j < all.size(); ++j) {
      auto path = graph.path(all[i], all[j]);
      if (std::find(path.begin(), path.end(), torso_node) != path.end())
        through.push_back(std::move(path));
    }
  out.paths_through_torso = static_cast<int>(through.size());

  if (through.empty()) {
    out.fallback = true;
    out.nodes = graph.path(extremities.head, torso_node);
    return out;
  }

  std::set<int> common(through.front().begin(), through.front().end());
  for (std::size_t p = 1; p < through.size(); ++p) {
    std::set<int> next;
    for (int node : through[p])
      if (common.count(node)) next.insert(node);
    common.swap(next);
  }
  if (common.empty()) {
    out.fallback = true;
    out.nodes = graph.path(extremities.head, torso_node);
    return out;
  }
  // order along the first through-path
  for (int node : through.front())
    if (common.count(node)) out.nodes.push_back(node);
  return out;
}

}  // namespace volcap::mocap
