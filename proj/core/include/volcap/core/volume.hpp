// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "volcap/core/types.hpp"

#include <cassert>
#include <vector>

namespace volcap {

/// Regular voxel lattice with a world-space mapping. Voxel (i,j,k) has its
/// center at origin + edge * (i,j,k); the default reconstruction grid is
/// 2^r x 2^(r+1) x 2^r (doubled along Y, the body height axis).
template <typename T>
class VolumeGrid {
 public:
  VolumeGrid() = default;
  VolumeGrid(int nx, int ny, int nz, Vec3 origin = Vec3::Zero(), double edge = 1.0, T fill = T{})
      : nx_(nx), ny_(ny), nz_(nz), origin_(origin), edge_(edge),
        data_(static_cast<std::size_t>(nx) * ny * nz, fill) {
    assert(edge > 0);
  }

  int nx() const { return nx_; }
  int ny() const { return ny_; }
  int nz() const { return nz_; }
  std::size_t size() const { return data_.size(); }
  const Vec3& origin() const { return origin_; }
  double edge() const { return edge_; }

  std::size_t index(int x, int y, int z) const {
    assert(in_bounds(x, y, z));
    return static_cast<std::size_t>(x) + static_cast<std::size_t>(nx_) * (y + static_cast<std::size_t>(ny_) * z);
  }
  bool in_bounds(int x, int y, int z) const {
    return x >= 0 && x < nx_ && y >= 0 && y < ny_ && z >= 0 && z < nz_;
  }

  T& at(int x, int y, int z) { return data_[index(x, y, z)]; }
  const T& at(int x, int y, int z) const { return data_[index(x, y, z)]; }

  Vec3 voxel_center(int x, int y, int z) const { return origin_ + edge_ * Vec3(x, y, z); }
  /// World point -> continuous voxel coordinates.
  Vec3 to_voxel(const Vec3& p) const { return (p - origin_) / edge_; }
  Vec3 to_world(const Vec3& v) const { return origin_ + edge_ * v; }

  std::vector<T>& data() { return data_; }
  const std::vector<T>& data() const { return data_; }

 private:
  int nx_ = 0, ny_ = 0, nz_ = 0;
  Vec3 origin_ = Vec3::Zero();
  double edge_ = 1.0;
  std::vector<T> data_;
};

/// Trilinear interpolation at continuous voxel coordinates, clamped to the
/// grid. Only meaningful for arithmetic T.
template <typename T>
double sample_trilinear(const VolumeGrid<T>& g, const Vec3& v) {
  auto clampf = [](double x, double lo, double hi) { return x < lo ? lo : (x > hi ? hi : x); };
  const double fx = clampf(v.x(), 0.0, g.nx() - 1.0);
  const double fy = clampf(v.y(), 0.0, g.ny() - 1.0);
  const double fz = clampf(v.z(), 0.0, g.nz() - 1.0);
  const int x0 = std::min(static_cast<int>(fx), g.nx() - 2 >= 0 ? g.nx() - 2 : 0);
  const int y0 = std::min(static_cast<int>(fy), g.ny() - 2 >= 0 ? g.ny() - 2 : 0);
  const int z0 = std::min(static_cast<int>(fz), g.nz() - 2 >= 0 ? g.nz() - 2 : 0);
  const int x1 = std::min(x0 + 1, g.nx() - 1), y1 = std::min(y0 + 1, g.ny() - 1), z1 = std::min(z0 + 1, g.nz() - 1);
  const double tx = fx - x0, ty = fy - y0, tz = fz - z0;
  auto v000 = static_cast<double>(g.at(x0, y0, z0)), v100 = static_cast<double>(g.at(x1, y0, z0));
  auto v010 = static_cast<double>(g.at(x0, y1, z0)), v110 = static_cast<double>(g.at(x1, y1, z0));
  auto v001 = static_cast<double>(g.at(x0, y0, z1)), v101 = static_cast<double>(g.at(x1, y0, z1));
  auto v011 = static_cast<double>(g.at(x0, y1, z1)), v111 = static_cast<double>(g.at(x1, y1, z1));
  const double c00 = v000 * (1 - tx) + v100 * tx;
  const double c10 = v010 * (1 - tx) + v110 * tx;
  const double c01 = v001 * (1 - tx) + v101 * tx;
  const double c11 = v011 * (1 - tx) + v111 * tx;
  const double c0 = c00 * (1 - ty) + c10 * ty;
  const double c1 = c01 * (1 - ty) + c11 * ty;
  return c0 * (1 - tz) + c1 * tz;
}

}  // namespace volcap
