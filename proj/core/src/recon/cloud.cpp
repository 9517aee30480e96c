// SPDX-License-Identifier: Apache-2.0
#include "volcap/recon/cloud.hpp"

#include "volcap/core/camera.hpp"

#include <cmath>

namespace volcap::recon {
namespace {

struct PixelVertex {
  Vec3 local;      // camera frame
  Vec3 normal_sum = Vec3::Zero();
  int tri_count = 0;
};

}  // namespace

OrientedCloud build_cloud(const RgbdFrame& frame, const CameraView& camera, int sensor_index,
                          double discontinuity_mm) {
  const int w = frame.depth.width(), h = frame.depth.height();
  Image<int> vertex_index(w, h, -1);
  std::vector<PixelVertex> verts;
  std::vector<std::pair<int, int>> pixels;

  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      if (!frame.foreground.at(x, y)) continue;
      const auto d = frame.depth.at(x, y);
      if (d == 0) continue;
      vertex_index.at(x, y) = static_cast<int>(verts.size());
      verts.push_back({backproject_local(camera.intr, Vec2(x, y), d), Vec3::Zero(), 0});
      pixels.emplace_back(x, y);
    }

  // organized triangulation over each 2x2 quad; a triangle is kept only if
  // its three depths stay within the step-discontinuity threshold
  auto add_triangle = [&](int ia, int ib, int ic) {
    const double za = verts[ia].local.z(), zb = verts[ib].local.z(), zc = verts[ic].local.z();
    const double lo = std::min({za, zb, zc}), hi = std::max({za, zb, zc});
    if (hi - lo > discontinuity_mm) return;
    // winding chosen so a fronto-parallel surface gets a camera-facing normal
    Vec3 n = (verts[ic].local - verts[ia].local).cross(verts[ib].local - verts[ia].local);
    const double len = n.norm();
    if (len < 1e-12) return;
    n /= len;
    for (int i : {ia, ib, ic}) {
      verts[i].normal_sum += n;
      ++verts[i].tri_count;
    }
  };

  for (int y = 0; y + 1 < h; ++y)
    for (int x = 0; x + 1 < w; ++x) {
      const int i00 = vertex_index.at(x, y), i10 = vertex_index.at(x + 1, y);
      const int i01 = vertex_index.at(x, y + 1), i11 = vertex_index.at(x + 1, y + 1);
      if (i00 >= 0 && i10 >= 0 && i01 >= 0) add_triangle(i00, i10, i01);
      if (i10 >= 0 && i11 >= 0 && i01 >= 0) add_triangle(i10, i11, i01);
    }

  OrientedCloud cloud;
  cloud.sensor = sensor_index;
  cloud.weight_map = Image<float>(w, h, 0.f);
  cloud.points.reserve(verts.size());
  for (std::size_t i = 0; i < verts.size(); ++i) {
    if (verts[i].tri_count == 0) continue;  // isolated pixel
    Vec3 n = verts[i].normal_sum / verts[i].tri_count;
    const double len = n.norm();
    if (len < 1e-12) continue;
    n /= len;
    if (n.dot(verts[i].local) > 0) n = -n;  // face the camera
    OrientedPoint p;
    p.position = camera.pose.apply(verts[i].local);
    p.normal = camera.pose.R * n;
    p.weight = 1.0;
    p.px = pixels[i].first;
    p.py = pixels[i].second;
    p.sensor = sensor_index;
    cloud.points.push_back(p);
    cloud.weight_map.at(p.px, p.py) = 1.f;
  }
  return cloud;
}

void confidence_weights(OrientedCloud& cloud, const RgbdFrame& frame, const CameraView& camera,
                        int silhouette_radius_px) {
  const int w = frame.foreground.width(), h = frame.foreground.height();

  // summed-area table of the silhouette for the moving-average filter
  std::vector<std::uint32_t> sat(static_cast<std::size_t>(w + 1) * (h + 1), 0);
  auto sat_at = [&](int x, int y) -> std::uint32_t& {
    return sat[static_cast<std::size_t>(y) * (w + 1) + x];
  };
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x)
      sat_at(x + 1, y + 1) = sat_at(x, y + 1) + sat_at(x + 1, y) - sat_at(x, y) +
                             (frame.foreground.at(x, y) ? 1u : 0u);

  const int r = silhouette_radius_px;
  const double window = static_cast<double>(2 * r + 1) * (2 * r + 1);
  auto coverage = [&](int x, int y) {
    const int x0 = std::max(0, x - r), y0 = std::max(0, y - r);
    const int x1 = std::min(w - 1, x + r), y1 = std::min(h - 1, y + r);
    const auto count = sat_at(x1 + 1, y1 + 1) - sat_at(x0, y1 + 1) - sat_at(x1 + 1, y0) + sat_at(x0, y0);
    return count / window;  // fixed window size: off-image area counts as background
  };

  const Pose world_to_cam = camera.pose.inverse();
  for (auto& p : cloud.points) {
    const Vec3 local = world_to_cam.apply(p.position);
    const Vec3 n_local = world_to_cam.R * p.normal;
    const double w1 = std::max((-local.normalized()).dot(n_local), 0.0);
    const double w2 = coverage(p.px, p.py);
    p.weight = w1 * w2;
    cloud.weight_map.at(p.px, p.py) = static_cast<float>(p.weight);
  }
}

}  // namespace volcap::recon
