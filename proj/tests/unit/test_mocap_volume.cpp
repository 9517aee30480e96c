// SPDX-License-Identifier: Apache-2.0
#include "volcap/mocap/volume_ops.hpp"

#include <doctest.h>

#include <numbers>
#include <random>
#include <set>

using namespace volcap;
using namespace volcap::mocap;

namespace {

VolumeGrid<double> ball_volume(int n, const Vec3& center, double radius) {
  VolumeGrid<double> vol(n, n, n, Vec3::Zero(), 1.0, 0.0);
  for (int z = 0; z < n; ++z)
    for (int y = 0; y < n; ++y)
      for (int x = 0; x < n; ++x)
        if ((Vec3(x, y, z) - center).norm() <= radius) vol.at(x, y, z) = 1.0;
  return vol;
}

int count_components_26(const VolumeGrid<std::uint8_t>& grid) {
  VolumeGrid<std::uint8_t> seen(grid.nx(), grid.ny(), grid.nz(), Vec3::Zero(), 1.0, 0);
  int components = 0;
  std::vector<Eigen::Vector3i> stack;
  for (int z = 0; z < grid.nz(); ++z)
    for (int y = 0; y < grid.ny(); ++y)
      for (int x = 0; x < grid.nx(); ++x) {
        if (!grid.at(x, y, z) || seen.at(x, y, z)) continue;
        ++components;
        stack.push_back({x, y, z});
        seen.at(x, y, z) = 1;
        while (!stack.empty()) {
          const auto q = stack.back();
          stack.pop_back();
          for (int dz = -1; dz <= 1; ++dz)
            for (int dy = -1; dy <= 1; ++dy)
              for (int dx = -1; dx <= 1; ++dx) {
                const int nx = q.x() + dx, ny = q.y() + dy, nz = q.z() + dz;
                if (!grid.in_bounds(nx, ny, nz)) continue;
                if (grid.at(nx, ny, nz) && !seen.at(nx, ny, nz)) {
                  seen.at(nx, ny, nz) = 1;
                  stack.push_back({nx, ny, nz});
                }
              }
        }
      }
  return components;
}

}  // namespace

TEST_CASE("binarize: indicator ball recovered exactly") {
  const auto vol = ball_volume(32, Vec3(15.5, 15.5, 15.5), 9.0);
  const auto binary = binarize(vol, 0.5);
  std::size_t expected = 0;
  for (const double v : vol.data()) expected += v >= 0.5;
  CHECK(binary.voxels.size() == expected);
}

TEST_CASE("binarize: keeps only the larger component") {
  auto vol = ball_volume(40, Vec3(12, 12, 12), 8.0);
  // floating noise blob
  for (int z = 30; z < 33; ++z)
    for (int y = 30; y < 33; ++y)
      for (int x = 30; x < 33; ++x) vol.at(x, y, z) = 1.0;
  const auto binary = binarize(vol, 0.5);
  for (const auto& q : binary.voxels) CHECK(q.x() < 30);
}

TEST_CASE("binarize: ball volume matches the analytic count within 5 percent") {
  const double radius = 10.0;
  const auto vol = ball_volume(32, Vec3(15.5, 15.5, 15.5), radius);
  const auto binary = binarize(vol, 0.5);
  const double analytic = 4.0 / 3.0 * std::numbers::pi * radius * radius * radius;
  CHECK(std::abs(binary.voxels.size() - analytic) / analytic < 0.05);
}

TEST_CASE("binarize: empty interior is an error") {
  VolumeGrid<double> vol(8, 8, 8, Vec3::Zero(), 1.0, 0.0);
  // constant volume: every voxel equals the maximum, so the "interior"
  // spans everything; shift the level above it instead
  for (auto& v : vol.data()) v = -1.0;
  CHECK_THROWS(binarize(vol, std::nan("")));
}

TEST_CASE("skeletonize: single voxel survives") {
  BinaryVolume vol;
  vol.grid = VolumeGrid<std::uint8_t>(8, 8, 8, Vec3::Zero(), 1.0, 0);
  vol.grid.at(4, 4, 4) = 1;
  vol.voxels = {{4, 4, 4}};
  const auto skeleton = skeletonize(vol);
  REQUIRE(skeleton.size() == 1);
  CHECK(skeleton[0] == Eigen::Vector3i(4, 4, 4));
}

TEST_CASE("skeletonize: cylinder thins to a curve near its axis") {
  BinaryVolume vol;
  const int n = 72, radius = 6, length = 60;
  vol.grid = VolumeGrid<std::uint8_t>(n, n, 16, Vec3::Zero(), 1.0, 0);
  for (int z = 0; z < 16; ++z)
    for (int y = 0; y < n; ++y)
      for (int x = 0; x < n; ++x)
        if (x >= 5 && x < 5 + length && std::hypot(y - 36.0, z - 8.0) <= radius) {
          vol.grid.at(x, y, z) = 1;
          vol.voxels.push_back({x, y, z});
        }
  const auto skeleton = skeletonize(vol);
  REQUIRE_FALSE(skeleton.empty());
  CHECK(skeleton.size() < vol.voxels.size() / 10);

  // every skeleton voxel stays within 2 voxels of the true axis
  for (const auto& q : skeleton) {
    if (q.x() < 5 + radius || q.x() >= 5 + length - radius) continue;  // end caps erode inward
    CHECK(std::hypot(q.y() - 36.0, q.z() - 8.0) <= 2.0);
  }

  // result is one 26-connected curve and a subset of the input
  VolumeGrid<std::uint8_t> skel_grid(n, n, 16, Vec3::Zero(), 1.0, 0);
  for (const auto& q : skeleton) {
    CHECK(vol.grid.at(q.x(), q.y(), q.z()) == 1);
    skel_grid.at(q.x(), q.y(), q.z()) = 1;
  }
  CHECK(count_components_26(skel_grid) == 1);
}

TEST_CASE("skeletonize: preserves the component count of random blobs") {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> coord(8, 24), radius(3, 6);
  for (int trial = 0; trial < 100; ++trial) {
    // connected union of balls: each ball overlaps the previous one
    BinaryVolume vol;
    vol.grid = VolumeGrid<std::uint8_t>(32, 32, 32, Vec3::Zero(), 1.0, 0);
    Vec3 prev(coord(rng), coord(rng), coord(rng));
    std::vector<std::pair<Vec3, double>> balls = {{prev, radius(rng)}};
    for (int b = 1; b < 4; ++b) {
      std::uniform_real_distribution<double> step(-4, 4);
      const Vec3 center = prev + Vec3(step(rng), step(rng), step(rng));
      balls.emplace_back(center, radius(rng));
      prev = center;
    }
    for (int z = 0; z < 32; ++z)
      for (int y = 0; y < 32; ++y)
        for (int x = 0; x < 32; ++x)
          for (const auto& [c, r] : balls)
            if ((Vec3(x, y, z) - c).norm() <= r) {
              if (!vol.grid.at(x, y, z)) {
                vol.grid.at(x, y, z) = 1;
                vol.voxels.push_back({x, y, z});
              }
              break;
            }
    if (vol.voxels.empty()) continue;
    REQUIRE(count_components_26(vol.grid) == 1);

    const auto skeleton = skeletonize(vol);
    VolumeGrid<std::uint8_t> skel_grid(32, 32, 32, Vec3::Zero(), 1.0, 0);
    for (const auto& q : skeleton) skel_grid.at(q.x(), q.y(), q.z()) = 1;
    CHECK(count_components_26(skel_grid) == 1);
  }
}

TEST_CASE("find_torso: center of a symmetric ball") {
  const auto vol = ball_volume(32, Vec3(15.5, 15.5, 15.5), 9.0);
  const auto binary = binarize(vol, 0.5);
  std::vector<Vec3> nodes;
  for (const auto& q : binary.voxels) nodes.push_back(binary.voxel_world(q));
  const int torso = find_torso(binary.voxels, binary.grid, nodes);
  CHECK((nodes[torso] - Vec3(15.5, 15.5, 15.5)).norm() < 1.0);
}

TEST_CASE("find_torso: exact argmin matches brute force on 500 random voxels") {
  std::mt19937_64 rng(11);
  std::set<std::tuple<int, int, int>> unique_voxels;
  while (unique_voxels.size() < 500)
    unique_voxels.insert({static_cast<int>(rng() % 40), static_cast<int>(rng() % 40),
                          static_cast<int>(rng() % 40)});
  std::vector<Eigen::Vector3i> q_h;
  VolumeGrid<std::uint8_t> grid(40, 40, 40, Vec3::Zero(), 2.5, 0);
  for (const auto& [x, y, z] : unique_voxels) {
    q_h.push_back({x, y, z});
    grid.at(x, y, z) = 1;
  }
  std::vector<Vec3> positions;
  for (const auto& q : q_h) positions.push_back(grid.voxel_center(q.x(), q.y(), q.z()));

  // brute force O(n^2)
  std::size_t best = 0;
  double best_sum = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < positions.size(); ++i) {
    double sum = 0;
    for (const auto& p : positions) sum += (positions[i] - p).norm();
    if (sum < best_sum) {
      best_sum = sum;
      best = i;
    }
  }

  const int torso = find_torso(q_h, grid, positions);
  CHECK(torso == static_cast<int>(best));
}

TEST_CASE("find_torso: L-shaped volume lands near the corner, always on the skeleton") {
  VolumeGrid<std::uint8_t> grid(48, 48, 12, Vec3::Zero(), 1.0, 0);
  std::vector<Eigen::Vector3i> q_h;
  for (int z = 4; z < 8; ++z)
    for (int y = 4; y < 44; ++y)
      for (int x = 4; x < 10; ++x) {
        grid.at(x, y, z) = 1;
        q_h.push_back({x, y, z});
      }
  for (int z = 4; z < 8; ++z)
    for (int y = 4; y < 10; ++y)
      for (int x = 10; x < 44; ++x) {
        grid.at(x, y, z) = 1;
        q_h.push_back({x, y, z});
      }
  // brute force reference
  std::vector<Vec3> positions;
  for (const auto& q : q_h) positions.push_back(grid.voxel_center(q.x(), q.y(), q.z()));
  std::size_t best = 0;
  double best_sum = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < positions.size(); ++i) {
    double sum = 0;
    for (const auto& p : positions) sum += (positions[i] - p).norm();
    if (sum < best_sum) {
      best_sum = sum;
      best = i;
    }
  }
  // skeleton nodes: a sparse subset; the snapped torso must be one of them
  std::vector<Vec3> skeleton_nodes;
  for (std::size_t i = 0; i < positions.size(); i += 17) skeleton_nodes.push_back(positions[i]);
  const int torso = find_torso(q_h, grid, skeleton_nodes);
  CHECK(torso >= 0);
  CHECK(torso < static_cast<int>(skeleton_nodes.size()));
  // near the corner region of the L
  CHECK((positions[best] - Vec3(8, 8, 5.5)).norm() < 8.0);
}
