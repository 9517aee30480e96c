// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "volcap/core/skeleton.hpp"
#include "volcap/mocap/skeleton_graph.hpp"
#include "volcap/mocap/volume_ops.hpp"

#include <array>
#include <optional>
#include <span>

namespace volcap::mocap {

/// Leaf node indices labeled by body role. Wrists and ankles stay
/// unordered until the lateral axis assigns left/right.
struct ExtremityLabels {
  int head = -1;
  std::array<int, 2> wrists{-1, -1};
  std::array<int, 2> ankles{-1, -1};
};

/// Per-subject structure from the X-pose calibration phase. Index 0 =
/// left, 1 = right. Local offsets live in the calibration torso frame.
struct BodyCalibration {
  std::array<double, 2> upper_arm{}, forearm{}, thigh{}, shank{};
  double geodesic_head = 0;
  std::array<double, 2> geodesic_wrist{}, geodesic_ankle{};
  std::array<Vec3, 2> local_shoulder{}, local_hip{};
  Vec3 local_neck = Vec3::Zero();

  std::array<double, 5> extremity_geodesics() const {
    return {geodesic_head, geodesic_wrist[0], geodesic_wrist[1], geodesic_ankle[0],
            geodesic_ankle[1]};
  }
};

struct MocapConfig {
  double mst_radius_mm = 150.0;
  double trunk_radius_factor = 1.5;   // times the median spine-to-boundary distance
  int torso_exact_limit = 5000;
  int torso_subsample = 2000;
  double straight_limb_threshold_mm = 25.0;  // minimum bend for the calibration solver
  int calibration_window = 10;               // consecutive consistent frames required
  double repeatability_mm = 20.0;
  double kalman_sigma_a = 500.0;  // process noise, mm/s^2
  double kalman_sigma_z = 15.0;   // measurement noise, mm
};

/// Leaves labeled as head/wrists/ankles. The five extremities split into
/// upper and lower groups by which extremity pairs' tree paths run through
/// the torso node (falling back to height along `up`); with fewer than
/// five leaves the ankle paths are subtracted to reveal stacked wrists,
/// with more the calibrated geodesic lengths select the real five.
/// Returns nothing when tracking is lost.
std::optional<ExtremityLabels> detect_extremities(const SkeletonGraph& graph, int torso_node,
                                                  const Vec3& up,
                                                  const BodyCalibration* calibration);

struct SpinePath {
  std::vector<int> nodes;       // ordered along the tree
  int paths_through_torso = 0;  // |B|
  bool fallback = false;        // empty intersection; head-torso segment used
};

/// Intersection of all extremity-to-extremity paths passing the torso.
SpinePath extract_spine(const SkeletonGraph& graph, const ExtremityLabels& extremities,
                        int torso_node);

/// 1.5x the median distance from spine nodes to the volume boundary.
double trunk_radius(const BinaryVolume& volume, const SkeletonGraph& graph,
                    const SpinePath& spine, double factor = 1.5);

/// PCA orientation of the trunk voxels around the spine. Axis 1 points
/// toward the head, axis 3 toward the body front (continuity with
/// `previous` when provided); near-isotropic trunks reuse `previous`.
Mat3 torso_orientation(const BinaryVolume& volume, std::span<const Vec3> spine_positions,
                       double r_tr, const Vec3& head_direction, const Mat3* previous);

struct RigidJoints {
  std::array<Vec3, 2> shoulder, hip;
  Vec3 neck;
};

RigidJoints place_rigid_body(const Mat3& rotation, const Vec3& torso, const BodyCalibration& c);

/// Link-joint solve: the path node minimizing
/// | ||X_j - X_r|| - d_r | + | ||X_j - X_x|| - d_x |, ties toward the path
/// midpoint. Returns the index into `path_nodes`.
int solve_link_joint(std::span<const Vec3> path_nodes, const Vec3& root, const Vec3& extremity,
                     double d_root, double d_extremity);

/// X-pose link-joint rule: the node farthest from the root-extremity line.
/// Returns {index, distance}.
std::pair<int, double> max_deviation_node(std::span<const Vec3> path_nodes, const Vec3& root,
                                          const Vec3& extremity);

/// Constant-velocity Kalman filter for one joint; covariance is shared
/// across axes.
struct JointFilter {
  bool initialized = false;
  Vec3 position = Vec3::Zero();
  Vec3 velocity = Vec3::Zero();
  Eigen::Matrix2d covariance = Eigen::Matrix2d::Zero();

  /// Predict + update; with no measurement the prediction stands.
  Vec3 step(const std::optional<Vec3>& measurement, double dt_s, double sigma_a, double sigma_z);
};

struct SkeletonPose {
  std::array<Vec3, kJointCount> joints{};
  Mat3 torso_rotation = Mat3::Identity();
  bool valid = false;
  int frame_index = 0;
  double time_ms = 0;
};

struct TrackerState {
  std::array<JointFilter, kJointCount> filters;
  std::optional<Mat3> previous_rotation;
  std::optional<double> previous_time_ms;
};

/// Shared per-frame volume analysis: binarize, skeletonize, torso, MST.
struct FrameAnalysis {
  BinaryVolume binary;
  SkeletonGraph graph;
  int torso_node = -1;
  Vec3 torso_position = Vec3::Zero();
};

FrameAnalysis analyze_volume(const VolumeGrid<double>& volume, double level,
                             const MocapConfig& config = {});

/// Full per-frame tracking pass over a reconstructed volume. On failure
/// the returned pose is invalid and the filter state is carried unchanged.
SkeletonPose track_frame(const VolumeGrid<double>& volume, double level, double time_ms,
                         int frame_index, const Vec3& up, const BodyCalibration& calibration,
                         TrackerState& state, const MocapConfig& config = {});

/// X-pose user calibration over a frame sequence; accepts once a window of
/// consecutive frames agrees within the repeatability threshold and
/// left/right symmetry. Throws when no window qualifies.
BodyCalibration calibrate_user(std::span<const FrameAnalysis> frames, const Vec3& up,
                               const MocapConfig& config = {});

/// Flexion angle (degrees) at a link joint between its two bone vectors.
double joint_angle_deg(const SkeletonPose& pose, Joint link);

}  // namespace volcap::mocap
