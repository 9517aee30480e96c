// SPDX-License-Identifier: Apache-2.0
#include "volcap/core/camera.hpp"

namespace volcap {

std::optional<Vec2> project_local(const Intrinsics& intr, const Vec3& x_cam) {
  if (x_cam.z() <= 0) return std::nullopt;
  return Vec2(intr.fx * x_cam.x() / x_cam.z() + intr.cx,
              intr.fy * x_cam.y() / x_cam.z() + intr.cy);
}

Vec3 backproject_local(const Intrinsics& intr, const Vec2& u, double z_mm) {
  if (z_mm <= 0) throw std::invalid_argument("backproject: depth must be positive");
  return Vec3((u.x() - intr.cx) * z_mm / intr.fx,
              (u.y() - intr.cy) * z_mm / intr.fy,
              z_mm);
}

std::optional<Vec2> project(const CameraView& cam, const Vec3& x_world) {
  return project_local(cam.intr, cam.pose.apply_inverse(x_world));
}

Vec3 backproject(const CameraView& cam, const Vec2& u, double z_mm) {
  return cam.pose.apply(backproject_local(cam.intr, u, z_mm));
}

}  // namespace volcap
