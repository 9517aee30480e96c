// SPDX-License-Identifier: Apache-2.0
#include "volcap/recon/marching_cubes.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace volcap;
using namespace volcap::recon;

namespace {

VolumeGrid<double> sphere_indicator(int n, double radius) {
  VolumeGrid<double> vol(n, n, n, Vec3::Zero(), 1.0, 0.0);
  const Vec3 c((n - 1) / 2.0, (n - 1) / 2.0, (n - 1) / 2.0);
  for (int z = 0; z < n; ++z)
    for (int y = 0; y < n; ++y)
      for (int x = 0; x < n; ++x)
        if ((Vec3(x, y, z) - c).norm() <= radius) vol.at(x, y, z) = 1.0;
  return vol;
}

}  // namespace

TEST_CASE("marching_cubes: field below the level gives an empty mesh") {
  VolumeGrid<double> vol(8, 8, 8, Vec3::Zero(), 1.0, 0.0);
  const auto mesh = marching_cubes(vol, 0.5);
  CHECK(mesh.empty());
  CHECK(mesh.triangle_count() == 0);
}

TEST_CASE("marching_cubes: indicator sphere is watertight with Euler characteristic 2") {
  const auto vol = sphere_indicator(48, 20.0);
  const auto mesh = marching_cubes(vol, 0.5);
  REQUIRE(mesh.triangle_count() > 1000);
  mesh.validate();
  const auto topo = analyze_topology(mesh);
  CHECK(topo.edge_manifold);
  CHECK(topo.euler_characteristic() == 2);
}

TEST_CASE("marching_cubes: sphere area and vertex distance against the analytic sphere") {
  const double radius = 20.0;
  const auto vol = sphere_indicator(48, radius);
  const auto mesh = marching_cubes(vol, 0.5);
  const Vec3 c(23.5, 23.5, 23.5);

  double max_dev = 0;
  for (const auto& v : mesh.vertices)
    max_dev = std::max(max_dev, std::abs((v - c).norm() - radius));
  CHECK(max_dev < 0.87);  // half the voxel diagonal

  const double area = surface_area(mesh);
  const double analytic = 4 * std::numbers::pi * radius * radius;
  CHECK(std::abs(area - analytic) / analytic < 0.02);
}

TEST_CASE("marching_cubes: no degenerate triangles") {
  const auto vol = sphere_indicator(32, 12.2);
  const auto mesh = marching_cubes(vol, 0.5);
  for (const auto& t : mesh.triangles) {
    const Vec3 e1 = mesh.vertices[t[1]] - mesh.vertices[t[0]];
    const Vec3 e2 = mesh.vertices[t[2]] - mesh.vertices[t[0]];
    CHECK(0.5 * e1.cross(e2).norm() > 1e-12);
  }
}

TEST_CASE("marching_cubes: normals point outward on the sphere") {
  const auto vol = sphere_indicator(40, 15.0);
  const auto mesh = marching_cubes(vol, 0.5);
  const Vec3 c(19.5, 19.5, 19.5);
  REQUIRE(mesh.normals.size() == mesh.vertices.size());
  int agree = 0;
  for (std::size_t i = 0; i < mesh.vertices.size(); ++i)
    if (mesh.normals[i].dot(mesh.vertices[i] - c) > 0) ++agree;
  CHECK(agree == static_cast<int>(mesh.vertices.size()));
  // triangle winding consistent with the normals
  int winding_agree = 0;
  for (const auto& t : mesh.triangles) {
    const Vec3 n = (mesh.vertices[t[1]] - mesh.vertices[t[0]])
                       .cross(mesh.vertices[t[2]] - mesh.vertices[t[0]]);
    const Vec3 avg =
        (mesh.normals[t[0]] + mesh.normals[t[1]] + mesh.normals[t[2]]).normalized();
    if (n.dot(avg) > 0) ++winding_agree;
  }
  CHECK(winding_agree == static_cast<int>(mesh.triangle_count()));
}

TEST_CASE("marching_cubes: watertight on smooth noisy fields") {
  // random smooth blobs: sum of a few Gaussians minus a threshold
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> pos(10, 22), width(3, 6);
  for (int trial = 0; trial < 20; ++trial) {
    VolumeGrid<double> vol(32, 32, 32, Vec3::Zero(), 1.0, 0.0);
    std::vector<Vec3> centers;
    std::vector<double> widths;
    for (int b = 0; b < 4; ++b) {
      centers.emplace_back(pos(rng), pos(rng), pos(rng));
      widths.push_back(width(rng));
    }
    for (int z = 0; z < 32; ++z)
      for (int y = 0; y < 32; ++y)
        for (int x = 0; x < 32; ++x) {
          double v = 0;
          for (std::size_t b = 0; b < centers.size(); ++b)
            v += std::exp(-(Vec3(x, y, z) - centers[b]).squaredNorm() /
                          (2 * widths[b] * widths[b]));
          vol.at(x, y, z) = v;
        }
    const auto mesh = marching_cubes(vol, 0.5);
    if (mesh.empty()) continue;
    const auto topo = analyze_topology(mesh);
    CHECK(topo.edge_manifold);
  }
}
