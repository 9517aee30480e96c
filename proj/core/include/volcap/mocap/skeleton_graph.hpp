// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "volcap/core/types.hpp"

#include <vector>

namespace volcap::mocap {

/// Radius graph over skeleton voxel centers with its Kruskal MST. Path
/// costs along the tree are geodesic distances.
struct SkeletonGraph {
  std::vector<Vec3> nodes;

  struct Edge {
    int a = 0, b = 0;
    double cost = 0;
  };
  std::vector<Edge> mst_edges;
  std::vector<std::vector<std::pair<int, double>>> adjacency;  // MST only
  std::vector<int> leaves;                                     // degree-1 nodes
  bool connected = true;  // radius graph spanned all nodes; otherwise a forest

  int degree(int node) const { return static_cast<int>(adjacency[node].size()); }
  /// Unique tree path between two nodes (inclusive); empty when they live
  /// in different components.
  std::vector<int> path(int from, int to) const;
  /// Geodesic distance to every node from `root` (infinity off-component).
  std::vector<double> geodesics_from(int root) const;
  /// Total MST edge weight.
  double total_weight() const;
};

SkeletonGraph build_mst(const std::vector<Vec3>& nodes, double radius_mm = 150.0);

}  // namespace volcap::mocap
