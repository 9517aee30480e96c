// SPDX-License-Identifier: Apache-2.0
#include "volcap/eval/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace volcap::eval {

double vre(const MaskImage& rendered, const MaskImage& ground) {
  if (rendered.width() != ground.width() || rendered.height() != ground.height())
    throw std::invalid_argument("vre: mask dimensions differ");
  long long xor_count = 0, or_count = 0;
  for (int y = 0; y < rendered.height(); ++y)
    for (int x = 0; x < rendered.width(); ++x) {
      const bool a = rendered.at(x, y) != 0, b = ground.at(x, y) != 0;
      xor_count += a != b;
      or_count += a || b;
    }
  return or_count == 0 ? 0.0 : static_cast<double>(xor_count) / static_cast<double>(or_count);
}

std::optional<double> hausdorff2d(const MaskImage& rendered, const MaskImage& ground) {
  if (rendered.width() != ground.width() || rendered.height() != ground.height())
    throw std::invalid_argument("hausdorff2d: mask dimensions differ");
  bool any_r = false, any_g = false;
  for (const auto v : rendered.data()) any_r = any_r || v;
  for (const auto v : ground.data()) any_g = any_g || v;
  if (!any_r || !any_g) return std::nullopt;

  const auto dt_r = distance_transform(rendered);
  const auto dt_g = distance_transform(ground);
  double h = 0;
  for (int y = 0; y < rendered.height(); ++y)
    for (int x = 0; x < rendered.width(); ++x) {
      if (rendered.at(x, y)) h = std::max(h, static_cast<double>(dt_g.at(x, y)));
      if (ground.at(x, y)) h = std::max(h, static_cast<double>(dt_r.at(x, y)));
    }
  return h;
}

namespace {

// minimal exact 3D kd-tree for nearest-neighbor queries
class KdTree {
 public:
  explicit KdTree(std::span<const Vec3> points) : points_(points) {
    order_.resize(points.size());
    std::iota(order_.begin(), order_.end(), 0);
    build(0, static_cast<int>(points.size()), 0);
  }

  double nearest_sq(const Vec3& q) const {
    double best = std::numeric_limits<double>::infinity();
    search(q, 0, static_cast<int>(points_.size()), 0, best);
    return best;
  }

 private:
  void build(int lo, int hi, int axis) {
    if (hi - lo <= 1) return;
    const int mid = (lo + hi) / 2;
    std::nth_element(order_.begin() + lo, order_.begin() + mid, order_.begin() + hi,
                     [&](int a, int b) { return points_[a](axis) < points_[b](axis); });
    build(lo, mid, (axis + 1) % 3);
    build(mid + 1, hi, (axis + 1) % 3);
  }

  void search(const Vec3& q, int lo, int hi, int axis, double& best) const {
    if (lo >= hi) return;
    const int mid = (lo + hi) / 2;
    const Vec3& p = points_[order_[mid]];
    best = std::min(best, (p - q).squaredNorm());
    const double delta = q(axis) - p(axis);
    const int next = (axis + 1) % 3;
    if (delta < 0) {
      search(q, lo, mid, next, best);
      if (delta * delta < best) search(q, mid + 1, hi, next, best);
    } else {
      search(q, mid + 1, hi, next, best);
      if (delta * delta < best) search(q, lo, mid, next, best);
    }
  }

  std::span<const Vec3> points_;
  std::vector<int> order_;
};

}  // namespace

double cp_rmse(std::span<const Vec3> ground, std::span<const Vec3> reconstructed) {
  if (ground.empty() || reconstructed.empty())
    throw std::invalid_argument("cp_rmse: empty point cloud");
  const KdTree tree(reconstructed);
  double sum = 0;
  for (const auto& g : ground) sum += tree.nearest_sq(g);
  return std::sqrt(sum / static_cast<double>(ground.size()));
}

}  // namespace volcap::eval
