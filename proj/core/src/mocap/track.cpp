// SPDX-License-Identifier: Apache-2.0
#include "volcap/mocap/track.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace volcap::mocap {

double trunk_radius(const BinaryVolume& volume, const SkeletonGraph& graph,
                    const SpinePath& spine, double factor) {
  const auto boundary = boundary_voxels(volume);
  if (boundary.empty() || spine.nodes.empty())
    throw std::runtime_error("trunk_radius: no boundary or spine");
  std::vector<double> dists;
  dists.reserve(spine.nodes.size());
  for (int node : spine.nodes) {
    const Vec3& p = graph.nodes[node];
    double best = std::numeric_limits<double>::infinity();
    for (const auto& b : boundary) best = std::min(best, (b - p).squaredNorm());
    dists.push_back(std::sqrt(best));
  }
  const std::size_t mid = dists.size() / 2;
  std::nth_element(dists.begin(), dists.begin() + mid, dists.end());
  return factor * dists[mid];
}

Mat3 torso_orientation(const BinaryVolume& volume, std::span<const Vec3> spine_positions,
                       double r_tr, const Vec3& head_direction, const Mat3* previous) {
  auto fallback = [&]() -> Mat3 {
    if (previous) return *previous;
    throw std::runtime_error("torso_orientation: degenerate trunk and no previous frame");
  };
  if (spine_positions.empty()) return fallback();

  // trunk voxels: everything within r_tr of the spine
  std::vector<Vec3> trunk;
  const double r2 = r_tr * r_tr;
  for (const auto& q : volume.voxels) {
    const Vec3 p = volume.voxel_world(q);
    for (const auto& s : spine_positions)
      if ((p - s).squaredNorm() <= r2) {
        trunk.push_back(p);
        break;
      }
  }
  if (trunk.size() < 10) return fallback();

  Vec3 mean = Vec3::Zero();
  for (const auto& p : trunk) mean += p;
  mean /= static_cast<double>(trunk.size());
  Mat3 cov = Mat3::Zero();
  for (const auto& p : trunk) cov += (p - mean) * (p - mean).transpose();
  cov /= static_cast<double>(trunk.size());

  Eigen::SelfAdjointEigenSolver<Mat3> eig(cov);  // eigenvalues ascending
  const Vec3 lambda = eig.eigenvalues();
  if (lambda(1) <= 0 || lambda(2) / lambda(1) < 1.2 * 1.2) return fallback();

  Vec3 axis_up = eig.eigenvectors().col(2);     // largest variance: along the spine
  Vec3 axis_front = eig.eigenvectors().col(0);  // smallest: body front-back
  if (axis_up.dot(head_direction) < 0) axis_up = -axis_up;
  if (previous) {
    if (axis_front.dot(previous->col(2)) < 0) axis_front = -axis_front;
  } else {
    const Vec3 hint = std::abs(axis_front.z()) > 1e-6 ? Vec3(0, 0, 1) : Vec3(1, 0, 0);
    if (axis_front.dot(hint) < 0) axis_front = -axis_front;
  }
  const Vec3 axis_lateral = axis_front.cross(axis_up);

  Mat3 r;
  r.col(0) = axis_up;
  r.col(1) = axis_lateral;
  r.col(2) = axis_front;
  return r;
}

RigidJoints place_rigid_body(const Mat3& rotation, const Vec3& torso, const BodyCalibration& c) {
  RigidJoints out;
  for (int side = 0; side < 2; ++side) {
    out.shoulder[side] = torso + rotation * c.local_shoulder[side];
    out.hip[side] = torso + rotation * c.local_hip[side];
  }
  out.neck = torso + rotation * c.local_neck;
  return out;
}

int solve_link_joint(std::span<const Vec3> path_nodes, const Vec3& root, const Vec3& extremity,
                     double d_root, double d_extremity) {
  if (path_nodes.empty()) throw std::invalid_argument("solve_link_joint: empty path");
  int best = 0;
  double best_cost = std::numeric_limits<double>::infinity();
  const double mid = (static_cast<double>(path_nodes.size()) - 1.0) / 2.0;
  for (int j = 0; j < static_cast<int>(path_nodes.size()); ++j) {
    const double cost = std::abs((path_nodes[j] - root).norm() - d_root) +
                        std::abs((path_nodes[j] - extremity).norm() - d_extremity);
    const bool better =
        cost < best_cost ||
        (cost == best_cost && std::abs(j - mid) < std::abs(best - mid));
    if (better) {
      best_cost = cost;
      best = j;
    }
  }
  return best;
}

std::pair<int, double> max_deviation_node(std::span<const Vec3> path_nodes, const Vec3& root,
                                          const Vec3& extremity) {
  if (path_nodes.empty()) throw std::invalid_argument("max_deviation_node: empty path");
  const Vec3 chord = extremity - root;
  const double chord_len = chord.norm();
  int best = 0;
  double best_dist = -1;
  for (int j = 0; j < static_cast<int>(path_nodes.size()); ++j) {
    const double dist = chord_len > 1e-12
                            ? (path_nodes[j] - root).cross(chord).norm() / chord_len
                            : (path_nodes[j] - root).norm();
    if (dist > best_dist) {
      best_dist = dist;
      best = j;
    }
  }
  return {best, best_dist};
}

FrameAnalysis analyze_volume(const VolumeGrid<double>& volume, double level,
                             const MocapConfig& config) {
  FrameAnalysis out;
  out.binary = binarize(volume, level);
  const auto skeleton = skeletonize(out.binary);
  std::vector<Vec3> nodes(skeleton.size());
  for (std::size_t i = 0; i < skeleton.size(); ++i)
    nodes[i] = out.binary.voxel_world(skeleton[i]);
  out.graph = build_mst(nodes, config.mst_radius_mm);
  out.torso_node = find_torso(out.binary.voxels, out.binary.grid, nodes,
                              config.torso_exact_limit, config.torso_subsample);
  out.torso_position = nodes[out.torso_node];
  return out;
}

double joint_angle_deg(const SkeletonPose& pose, Joint link) {
  int root, extremity;
  switch (link) {
    case kElbowL: root = kShoulderL; extremity = kWristL; break;
    case kElbowR: root = kShoulderR; extremity = kWristR; break;
    case kKneeL: root = kHipL; extremity = kAnkleL; break;
    case kKneeR: root = kHipR; extremity = kAnkleR; break;
    default: throw std::invalid_argument("joint_angle_deg: not a link joint");
  }
  const Vec3 u = (pose.joints[root] - pose.joints[link]).normalized();
  const Vec3 v = (pose.joints[extremity] - pose.joints[link]).normalized();
  return std::acos(std::clamp(u.dot(v), -1.0, 1.0)) * 180.0 / std::numbers::pi;
}

namespace {

// left/right by the sign along the lateral axis (front x up); larger
// projection = left, matching the calibration-phase convention
void order_by_lateral(std::array<int, 2>& pair, const SkeletonGraph& graph, const Mat3& rotation,
                      const Vec3& torso) {
  const Vec3 lateral = rotation.col(1);
  const double s0 = (graph.nodes[pair[0]] - torso).dot(lateral);
  const double s1 = (graph.nodes[pair[1]] - torso).dot(lateral);
  if (s1 > s0) std::swap(pair[0], pair[1]);
}

}  // namespace

SkeletonPose track_frame(const VolumeGrid<double>& volume, double level, double time_ms,
                         int frame_index, const Vec3& up, const BodyCalibration& calibration,
                         TrackerState& state, const MocapConfig& config) {
  SkeletonPose pose;
  pose.frame_index = frame_index;
  pose.time_ms = time_ms;

  std::array<std::optional<Vec3>, kJointCount> measured;
  Mat3 rotation = state.previous_rotation.value_or(Mat3::Identity());
  bool ok = true;
  try {
    const FrameAnalysis frame = analyze_volume(volume, level, config);
    const auto extremities =
        detect_extremities(frame.graph, frame.torso_node, up, &calibration);
    if (!extremities) throw std::runtime_error("tracking lost: extremities not found");

    const SpinePath spine = extract_spine(frame.graph, *extremities, frame.torso_node);
    std::vector<Vec3> spine_positions;
    for (int node : spine.nodes) spine_positions.push_back(frame.graph.nodes[node]);
    const double r_tr = trunk_radius(frame.binary, frame.graph, spine,
                                     config.trunk_radius_factor);
    const Vec3 head_dir = frame.graph.nodes[extremities->head] - frame.torso_position;
    const Mat3* prev = state.previous_rotation ? &*state.previous_rotation : nullptr;
    rotation = torso_orientation(frame.binary, spine_positions, r_tr, head_dir, prev);

    auto ext = *extremities;
    order_by_lateral(ext.wrists, frame.graph, rotation, frame.torso_position);
    order_by_lateral(ext.ankles, frame.graph, rotation, frame.torso_position);

    const RigidJoints rigid = place_rigid_body(rotation, frame.torso_position, calibration);
    measured[kTorso] = frame.torso_position;
    measured[kNeck] = rigid.neck;
    measured[kHead] = frame.graph.nodes[ext.head];
    measured[kShoulderL] = rigid.shoulder[0];
    measured[kShoulderR] = rigid.shoulder[1];
    measured[kHipL] = rigid.hip[0];
    measured[kHipR] = rigid.hip[1];

    struct Limb {
      int root_joint, link_joint, ext_joint;
      Vec3 root;
      int leaf;
      double d_root, d_ext;
    };
    const Limb limbs[4] = {
        {kShoulderL, kElbowL, kWristL, rigid.shoulder[0], ext.wrists[0],
         calibration.upper_arm[0], calibration.forearm[0]},
        {kShoulderR, kElbowR, kWristR, rigid.shoulder[1], ext.wrists[1],
         calibration.upper_arm[1], calibration.forearm[1]},
        {kHipL, kKneeL, kAnkleL, rigid.hip[0], ext.ankles[0], calibration.thigh[0],
         calibration.shank[0]},
        {kHipR, kKneeR, kAnkleR, rigid.hip[1], ext.ankles[1], calibration.thigh[1],
         calibration.shank[1]},
    };
    for (const Limb& limb : limbs) {
      // path from the node nearest the placed root joint out to the leaf
      int root_node = 0;
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < frame.graph.nodes.size(); ++i) {
        const double d2 = (frame.graph.nodes[i] - limb.root).squaredNorm();
        if (d2 < best) {
          best = d2;
          root_node = static_cast<int>(i);
        }
      }
      const auto path = frame.graph.path(root_node, limb.leaf);
      const Vec3 leaf_pos = frame.graph.nodes[limb.leaf];
      measured[limb.ext_joint] = leaf_pos;
      if (path.empty()) continue;
      std::vector<Vec3> positions;
      positions.reserve(path.size());
      for (int node : path) positions.push_back(frame.graph.nodes[node]);
      const int link =
          solve_link_joint(positions, limb.root, leaf_pos, limb.d_root, limb.d_ext);
      measured[limb.link_joint] = positions[link];
    }
  } catch (const std::runtime_error&) {
    ok = false;
  }

  const double dt_s = state.previous_time_ms
                          ? std::max((time_ms - *state.previous_time_ms) / 1000.0, 1e-3)
                          : 1.0 / 30.0;
  if (ok) {
    for (int j = 0; j < kJointCount; ++j)
      pose.joints[j] = state.filters[j].step(measured[j], dt_s, config.kalman_sigma_a,
                                             config.kalman_sigma_z);
    pose.torso_rotation = rotation;
    pose.valid = true;
    state.previous_rotation = rotation;
    state.previous_time_ms = time_ms;
  } else {
    // carry the state; report the prediction-only pose as invalid
    for (int j = 0; j < kJointCount; ++j) pose.joints[j] = state.filters[j].position;
    pose.torso_rotation = rotation;
    pose.valid = false;
  }
  return pose;
}

}  // namespace volcap::mocap
