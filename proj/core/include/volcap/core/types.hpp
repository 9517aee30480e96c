// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>

#include <cstdint>
#include <stdexcept>
#include <vector>

namespace volcap {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

/// All world units are millimeters, all time units milliseconds.

struct Rgb8 {
  std::uint8_t r = 0, g = 0, b = 0;
  bool operator==(const Rgb8&) const = default;
};

/// Pinhole intrinsics. Continuous pixel coordinates, pixel-center
/// convention (integer coordinate = center of the pixel).
struct Intrinsics {
  double fx = 0, fy = 0;
  double cx = 0, cy = 0;
  int width = 0, height = 0;

  void validate() const {
    if (fx <= 0 || fy <= 0) throw std::invalid_argument("Intrinsics: focal lengths must be positive");
    if (cx < 0 || cx >= width || cy < 0 || cy >= height)
      throw std::invalid_argument("Intrinsics: principal point outside image");
  }
  bool contains(const Vec2& u) const {
    return u.x() >= 0 && u.x() <= width - 1 && u.y() >= 0 && u.y() <= height - 1;
  }
};

/// Rigid transform, camera-to-world: X_world = R * X_cam + t.
struct Pose {
  Mat3 R = Mat3::Identity();
  Vec3 t = Vec3::Zero();

  Vec3 apply(const Vec3& x) const { return R * x + t; }
  Vec3 apply_inverse(const Vec3& x) const { return R.transpose() * (x - t); }
  Pose inverse() const { return Pose{R.transpose(), -(R.transpose() * t)}; }
  Pose compose(const Pose& rhs) const { return Pose{R * rhs.R, R * rhs.t + t}; }

  void validate(double tol = 1e-9) const {
    if (((R.transpose() * R) - Mat3::Identity()).cwiseAbs().maxCoeff() > tol)
      throw std::invalid_argument("Pose: rotation not orthonormal");
    if (std::abs(R.determinant() - 1.0) > tol)
      throw std::invalid_argument("Pose: rotation determinant != +1");
  }
};

/// One physical camera: intrinsics plus its world pose.
struct CameraView {
  Intrinsics intr;
  Pose pose;  // camera-to-world
};

/// One RGB-D sensor: depth camera with a world pose, RGB camera given by
/// intrinsics and a pose relative to the depth camera (the fixed KRT
/// approximation of the depth-to-color mapping).
struct Sensor {
  Intrinsics depth_intr;
  Pose pose;  // depth camera to world
  Intrinsics rgb_intr;
  Pose rgb_relative;  // rgb camera to depth camera

  CameraView depth_camera() const { return {depth_intr, pose}; }
  CameraView rgb_camera() const { return {rgb_intr, pose.compose(rgb_relative)}; }
};

/// The calibrated multi-sensor rig. Sensors [0, recon_count) take part in
/// reconstruction; the rest serve as held-out ground-truth views.
struct CameraRig {
  std::vector<Sensor> sensors;
  int recon_count = 0;        // K; sensors beyond this index are the K' ground-truth views
  Vec3 up = Vec3(0, 1, 0);    // world up axis

  int count() const { return static_cast<int>(sensors.size()); }
  int held_out_count() const { return count() - recon_count; }

  void validate() const {
    if (sensors.empty()) throw std::invalid_argument("CameraRig: needs at least one sensor");
    if (recon_count < 1 || recon_count > count())
      throw std::invalid_argument("CameraRig: invalid reconstruction sensor count");
    for (const auto& s : sensors) {
      s.depth_intr.validate();
      s.rgb_intr.validate();
      s.pose.validate();
      s.rgb_relative.validate();
    }
  }
};

}  // namespace volcap
