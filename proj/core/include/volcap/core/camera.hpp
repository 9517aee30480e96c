// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "volcap/core/types.hpp"

#include <optional>

namespace volcap {

/// World-to-projective mapping. Returns nothing if the point is at or
/// behind the camera plane.
std::optional<Vec2> project(const CameraView& cam, const Vec3& x_world);

/// Projective-to-world mapping for a pixel with known depth.
/// Throws std::invalid_argument for z_mm <= 0.
Vec3 backproject(const CameraView& cam, const Vec2& u, double z_mm);

/// Same mappings in the camera's local frame (pose ignored).
std::optional<Vec2> project_local(const Intrinsics& intr, const Vec3& x_cam);
Vec3 backproject_local(const Intrinsics& intr, const Vec2& u, double z_mm);

}  // namespace volcap
