// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "volcap/core/image.hpp"
#include "volcap/core/types.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <vector>

namespace volcap::calib {

/// Paired sensor-frame / model-frame 3D points.
struct Correspondences3D3D {
  std::vector<Vec3> sensor;  // V_k, sensor frame, mm
  std::vector<Vec3> model;   // V_M, anchor/model frame, mm
  std::size_t size() const { return sensor.size(); }
};

/// Paired world points / image pixels for camera resection.
struct Correspondences3D2D {
  std::vector<Vec3> points;  // world mm
  std::vector<Vec2> pixels;
  std::size_t size() const { return points.size(); }
};

/// 2D feature matches between one sensor's color image and the anchor
/// model's unwrapped texture. CSV columns: k,u_x,u_y,um_x,um_y.
struct Match {
  Vec2 image_px;
  Vec2 texture_px;
};
using MatchList = std::vector<Match>;

struct MatchFile {
  std::vector<MatchList> per_sensor;
};

void write_matches(const std::filesystem::path& path, const MatchFile& matches);
MatchFile read_matches(const std::filesystem::path& path, int sensor_count);

/// Anchor model: a mesh with per-vertex texture coordinates into the
/// unwrapped texture image M(u).
struct AnchorModel {
  std::vector<Vec3> vertices;   // model frame, mm
  std::vector<Vec2> texcoords;  // pixels in `texture`
  ColorImage texture;
  Vec3 half_extent;             // the underlying box half sizes
};

/// Textured box standing in for the physical calibration structure:
/// grid-tessellated faces, seeded block-noise texture.
AnchorModel make_box_model(const Vec3& size_mm, int grid_per_face, std::uint64_t seed);

/// Depth of the box surface along a ray, in the model frame.
std::optional<double> intersect_box(const Vec3& half_extent, const Vec3& origin, const Vec3& dir);

/// Renders the posed box into a sensor: depth from analytic ray-box
/// intersection, color by nearest-texel lookup of M(u).
RgbdFrame render_target(const AnchorModel& model, const Pose& model_to_world, const Sensor& sensor);

/// Exact 2D matches for visible model vertices, with optional pixel noise
/// and a fraction of wrong-texture-point outliers.
MatchList synthesize_matches(const AnchorModel& model, const Pose& model_to_world,
                             const CameraView& camera, int count, double pixel_noise,
                             double outlier_fraction, std::uint64_t seed);

/// Pixelwise median over frames, ignoring invalid (zero) samples.
DepthImage accumulate_depth(const std::vector<DepthImage>& frames);

/// Backprojects matched image points through the accumulated depth and
/// pairs them with the nearest-texture-coordinate model vertices. Matches
/// landing on invalid depth are dropped.
Correspondences3D3D lift_matches(const MatchList& matches, const DepthImage& accumulated_depth,
                                 const Intrinsics& depth_intrinsics, const AnchorModel& model);

struct RigidFit {
  Pose pose;        // sensor -> model: X_model = R * V_sensor + t
  double rms_mm = 0;
};

/// Least-squares rigid alignment of paired point sets, rotation
/// constrained to be proper (no scaling, no reflection).
RigidFit solve_procrustes(const Correspondences3D3D& corr);

struct RansacOptions {
  double inlier_threshold_mm = 30.0;
  int iterations = 500;
  std::uint64_t seed = 1;
};

/// RANSAC around solve_procrustes for outlier-contaminated matches;
/// refits on the final inlier set.
RigidFit solve_procrustes_ransac(const Correspondences3D3D& corr, const RansacOptions& options,
                                 std::vector<int>* inliers = nullptr);

struct ProjectionFit {
  Intrinsics intrinsics;
  Pose pose;  // camera-to-world
  double reprojection_rms_px = 0;
};

/// Fixed-KRT approximation from 3D-2D correspondences: normalized DLT
/// followed by Levenberg-Marquardt reprojection refinement.
ProjectionFit fit_projection(const Correspondences3D2D& corr, int width, int height);

}  // namespace volcap::calib
