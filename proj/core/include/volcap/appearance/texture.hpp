// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "volcap/core/image.hpp"
#include "volcap/core/mesh.hpp"
#include "volcap/recon/cloud.hpp"

#include <span>
#include <vector>

namespace volcap::appearance {

/// Mesh with per-vertex, per-sensor texture data: visibility, normalized
/// UV into the sensor's RGB image, and the blend weight taken from the
/// view's confidence map.
struct TexturedMesh {
  TriMesh mesh;
  int sensor_count = 0;
  std::vector<std::vector<std::uint8_t>> visible;  // [sensor][vertex]
  std::vector<std::vector<Vec2>> uv;               // [sensor][vertex], in [0,1]^2
  std::vector<std::vector<float>> weight;          // [sensor][vertex]
  std::vector<std::uint8_t> untextured;            // [vertex]; rendered light gray

  /// Copies the per-sensor data into mesh attribute channels
  /// (cam<k>_vis / cam<k>_uv / cam<k>_w and untextured) for file export.
  TriMesh with_channels() const;
  static TexturedMesh from_mesh_channels(const TriMesh& mesh);
};

/// A vertex is visible to a sensor when its projection lands in-bounds on
/// the foreground and the recorded depth agrees within eps_vis.
std::vector<std::vector<std::uint8_t>> vertex_visibility(const TriMesh& mesh,
                                                         const CameraRig& rig,
                                                         std::span<const RgbdFrame> frames,
                                                         double eps_vis_mm = 20.0);

/// UV via the RGB camera projection; weight from the confidence map at the
/// nearest depth pixel; sensors the vertex cannot see get zero weight.
TexturedMesh assign_texture(const TriMesh& mesh, const CameraRig& rig,
                            std::span<const RgbdFrame> frames,
                            std::span<const recon::OrientedCloud> clouds,
                            const std::vector<std::vector<std::uint8_t>>& visibility);

/// Maps a pixel-center coordinate into the normalized [0,1] UV used here.
inline Vec2 normalize_uv(const Vec2& px, const Intrinsics& intr) {
  return Vec2((px.x() + 0.5) / intr.width, (px.y() + 0.5) / intr.height);
}
inline Vec2 denormalize_uv(const Vec2& uv, int width, int height) {
  return Vec2(uv.x() * width - 0.5, uv.y() * height - 0.5);
}

}  // namespace volcap::appearance
