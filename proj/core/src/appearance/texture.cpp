// SPDX-License-Identifier: Apache-2.0
#include "volcap/appearance/texture.hpp"

#include "volcap/core/camera.hpp"

#include <cmath>
#include <stdexcept>

namespace volcap::appearance {

std::vector<std::vector<std::uint8_t>> vertex_visibility(const TriMesh& mesh,
                                                         const CameraRig& rig,
                                                         std::span<const RgbdFrame> frames,
                                                         double eps_vis_mm) {
  const int k_count = static_cast<int>(frames.size());
  std::vector<std::vector<std::uint8_t>> vis(k_count,
                                             std::vector<std::uint8_t>(mesh.vertex_count(), 0));
  for (int k = 0; k < k_count; ++k) {
    const CameraView cam = rig.sensors[k].depth_camera();
    const Pose world_to_cam = cam.pose.inverse();
    for (std::size_t v = 0; v < mesh.vertex_count(); ++v) {
      const Vec3 local = world_to_cam.apply(mesh.vertices[v]);
      const auto u = project_local(cam.intr, local);
      if (!u) continue;
      const int px = static_cast<int>(std::lround(u->x()));
      const int py = static_cast<int>(std::lround(u->y()));
      if (!frames[k].depth.in_bounds(px, py)) continue;
      if (!frames[k].foreground.at(px, py)) continue;
      const double recorded = frames[k].depth.at(px, py);
      if (std::abs(recorded - local.z()) < eps_vis_mm) vis[k][v] = 1;
    }
  }
  return vis;
}

TexturedMesh assign_texture(const TriMesh& mesh, const CameraRig& rig,
                            std::span<const RgbdFrame> frames,
                            std::span<const recon::OrientedCloud> clouds,
                            const std::vector<std::vector<std::uint8_t>>& visibility) {
  const int k_count = static_cast<int>(frames.size());
  TexturedMesh out;
  out.mesh = mesh;
  out.sensor_count = k_count;
  out.visible = visibility;
  out.uv.assign(k_count, std::vector<Vec2>(mesh.vertex_count(), Vec2::Zero()));
  out.weight.assign(k_count, std::vector<float>(mesh.vertex_count(), 0.f));
  out.untextured.assign(mesh.vertex_count(), 0);

  for (int k = 0; k < k_count; ++k) {
    const CameraView depth_cam = rig.sensors[k].depth_camera();
    const CameraView rgb_cam = rig.sensors[k].rgb_camera();
    for (std::size_t v = 0; v < mesh.vertex_count(); ++v) {
      if (!visibility[k][v]) continue;
      const auto u_rgb = project(rgb_cam, mesh.vertices[v]);
      if (!u_rgb) continue;
      out.uv[k][v] = normalize_uv(*u_rgb, rgb_cam.intr);
      const auto u_d = project(depth_cam, mesh.vertices[v]);
      if (u_d) {
        const int px = static_cast<int>(std::lround(u_d->x()));
        const int py = static_cast<int>(std::lround(u_d->y()));
        if (clouds[k].weight_map.in_bounds(px, py))
          out.weight[k][v] = clouds[k].weight_map.at(px, py);
      }
    }
  }
  for (std::size_t v = 0; v < mesh.vertex_count(); ++v) {
    bool any = false;
    for (int k = 0; k < k_count; ++k) any = any || visibility[k][v];
    if (!any) out.untextured[v] = 1;
  }
  return out;
}

TriMesh TexturedMesh::with_channels() const {
  TriMesh out = mesh;
  out.channels.clear();
  for (int k = 0; k < sensor_count; ++k) {
    auto& chv = out.add_channel("cam" + std::to_string(k) + "_vis", 1);
    auto& chu = out.add_channel("cam" + std::to_string(k) + "_uv", 2);
    auto& chw = out.add_channel("cam" + std::to_string(k) + "_w", 1);
    for (std::size_t v = 0; v < mesh.vertex_count(); ++v) {
      chv.data[v] = visible[k][v];
      chu.data[2 * v] = static_cast<float>(uv[k][v].x());
      chu.data[2 * v + 1] = static_cast<float>(uv[k][v].y());
      chw.data[v] = weight[k][v];
    }
  }
  auto& chun = out.add_channel("untextured", 1);
  for (std::size_t v = 0; v < mesh.vertex_count(); ++v) chun.data[v] = untextured[v];
  return out;
}

TexturedMesh TexturedMesh::from_mesh_channels(const TriMesh& source) {
  TexturedMesh out;
  out.mesh = source;
  out.mesh.channels.clear();
  int k = 0;
  while (source.find_channel("cam" + std::to_string(k) + "_vis")) ++k;
  out.sensor_count = k;
  const std::size_t n = source.vertex_count();
  out.visible.assign(out.sensor_count, std::vector<std::uint8_t>(n, 0));
  out.uv.assign(out.sensor_count, std::vector<Vec2>(n, Vec2::Zero()));
  out.weight.assign(out.sensor_count, std::vector<float>(n, 0.f));
  out.untextured.assign(n, 0);
  for (k = 0; k < out.sensor_count; ++k) {
    const auto* chv = source.find_channel("cam" + std::to_string(k) + "_vis");
    const auto* chu = source.find_channel("cam" + std::to_string(k) + "_uv");
    const auto* chw = source.find_channel("cam" + std::to_string(k) + "_w");
    if (!chv || !chu || !chw)
      throw std::runtime_error("TexturedMesh: incomplete texture channels in mesh");
    for (std::size_t v = 0; v < n; ++v) {
      out.visible[k][v] = chv->data[v] != 0.f;
      out.uv[k][v] = Vec2(chu->data[2 * v], chu->data[2 * v + 1]);
      out.weight[k][v] = chw->data[v];
    }
  }
  if (const auto* chun = source.find_channel("untextured"))
    for (std::size_t v = 0; v < n; ++v) out.untextured[v] = chun->data[v] != 0.f;
  return out;
}

}  // namespace volcap::appearance
