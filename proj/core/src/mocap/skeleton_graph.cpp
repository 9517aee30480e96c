// SPDX-License-Identifier: Apache-2.0
#include "volcap/mocap/skeleton_graph.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <queue>
#include <stdexcept>
#include <unordered_map>

namespace volcap::mocap {
namespace {

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  bool unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent[b] = a;
    return true;
  }
};

}  // namespace

SkeletonGraph build_mst(const std::vector<Vec3>& nodes, double radius_mm) {
  if (nodes.empty()) throw std::invalid_argument("build_mst: no nodes");
  SkeletonGraph g;
  g.nodes = nodes;
  const int n = static_cast<int>(nodes.size());

  // radius-bounded candidate edges via a uniform grid
  std::unordered_map<std::uint64_t, std::vector<int>> cells;
  auto cell_of = [&](const Vec3& p) {
    auto u = [&](double v) {
      return static_cast<std::uint64_t>(static_cast<long>(std::floor(v / radius_mm)) +
                                        (1L << 20)) & 0x1FFFFF;
    };
    return (u(p.x()) << 42) | (u(p.y()) << 21) | u(p.z());
  };
  for (int i = 0; i < n; ++i) cells[cell_of(nodes[i])].push_back(i);

  std::vector<SkeletonGraph::Edge> edges;
  const double r2 = radius_mm * radius_mm;
  for (int i = 0; i < n; ++i) {
    const Vec3& p = nodes[i];
    for (int dz = -1; dz <= 1; ++dz)
      for (int dy = -1; dy <= 1; ++dy)
        for (int dx = -1; dx <= 1; ++dx) {
          const auto it = cells.find(cell_of(p + radius_mm * Vec3(dx, dy, dz)));
          if (it == cells.end()) continue;
          for (int j : it->second) {
            if (j <= i) continue;
            const double d2 = (nodes[j] - p).squaredNorm();
            if (d2 < r2) edges.push_back({i, j, std::sqrt(d2)});
          }
        }
  }

  std::sort(edges.begin(), edges.end(), [](const auto& x, const auto& y) {
    if (x.cost != y.cost) return x.cost < y.cost;
    if (x.a != y.a) return x.a < y.a;
    return x.b < y.b;
  });

  UnionFind uf(n);
  g.adjacency.assign(n, {});
  for (const auto& e : edges) {
    if (!uf.unite(e.a, e.b)) continue;
    g.mst_edges.push_back(e);
    g.adjacency[e.a].emplace_back(e.b, e.cost);
    g.adjacency[e.b].emplace_back(e.a, e.cost);
  }
  g.connected = static_cast<int>(g.mst_edges.size()) == n - 1;
  for (int i = 0; i < n; ++i)
    if (g.degree(i) == 1) g.leaves.push_back(i);
  return g;
}

std::vector<int> SkeletonGraph::path(int from, int to) const {
  std::vector<int> parent(nodes.size(), -2);
  parent[from] = -1;
  std::queue<int> frontier;
  frontier.push(from);
  while (!frontier.empty() && parent[to] == -2) {
    const int cur = frontier.front();
    frontier.pop();
    for (const auto& [next, cost] : adjacency[cur])
      if (parent[next] == -2) {
        parent[next] = cur;
        frontier.push(next);
      }
  }
  if (parent[to] == -2) return {};
  std::vector<int> out;
  for (int cur = to; cur != -1; cur = parent[cur]) out.push_back(cur);
  std::reverse(out.begin(), out.end());
  return out;
}

std::vector<double> SkeletonGraph::geodesics_from(int root) const {
  std::vector<double> dist(nodes.size(), std::numeric_limits<double>::infinity());
  dist[root] = 0;
  std::queue<int> frontier;
  frontier.push(root);
  while (!frontier.empty()) {
    const int cur = frontier.front();
    frontier.pop();
    for (const auto& [next, cost] : adjacency[cur])
      if (std::isinf(dist[next])) {
        dist[next] = dist[cur] + cost;
        frontier.push(next);
      }
  }
  return dist;
}

double SkeletonGraph::total_weight() const {
  double sum = 0;
  for (const auto& e : mst_edges) sum += e.cost;
  return sum;
}

}  // namespace volcap::mocap
