// SPDX-License-Identifier: Apache-2.0
#include "volcap/mocap/track.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <vector>

namespace volcap::mocap {
namespace {

struct CalibSample {
  std::array<double, 2> upper_arm{}, forearm{}, thigh{}, shank{};
  double geodesic_head = 0;
  std::array<double, 2> geodesic_wrist{}, geodesic_ankle{};
  std::array<Vec3, 2> local_shoulder{}, local_hip{};
  Vec3 local_neck = Vec3::Zero();

  std::vector<double> lengths() const {
    return {upper_arm[0], upper_arm[1], forearm[0], forearm[1], thigh[0], thigh[1],
            shank[0], shank[1], geodesic_head, geodesic_wrist[0], geodesic_wrist[1],
            geodesic_ankle[0], geodesic_ankle[1]};
  }
};

// crossing of the extremity path with the trunk bounding box: the point
// where the path first leaves the box walking out from the torso
std::optional<Vec3> box_crossing(const SkeletonGraph& graph, const std::vector<int>& path,
                                 const Vec3& box_lo, const Vec3& box_hi) {
  auto inside = [&](const Vec3& p) {
    return (p.array() >= box_lo.array()).all() && (p.array() <= box_hi.array()).all();
  };
  for (std::size_t i = 0; i + 1 < path.size(); ++i) {
    const Vec3 a = graph.nodes[path[i]];
    const Vec3 b = graph.nodes[path[i + 1]];
    if (!inside(a) || inside(b)) continue;
    // clip the segment against the box faces
    double t_exit = 1.0;
    for (int axis = 0; axis < 3; ++axis) {
      const double d = b(axis) - a(axis);
      if (std::abs(d) < 1e-12) continue;
      for (const double face : {box_lo(axis), box_hi(axis)}) {
        const double t = (face - a(axis)) / d;
        if (t > 0 && t < t_exit) {
          const Vec3 p = a + t * (b - a);
          bool on_box = true;
          for (int other = 0; other < 3; ++other)
            if (other != axis &&
                (p(other) < box_lo(other) - 1e-9 || p(other) > box_hi(other) + 1e-9))
              on_box = false;
          if (on_box) t_exit = t;
        }
      }
    }
    return a + t_exit * (b - a);
  }
  return std::nullopt;
}

std::optional<CalibSample> measure_frame(const FrameAnalysis& frame, const Vec3& up,
                                         const MocapConfig& config, const Mat3* previous_rotation,
                                         Mat3& rotation_out) {
  const auto extremities = detect_extremities(frame.graph, frame.torso_node, up, nullptr);
  if (!extremities) return std::nullopt;

  const SpinePath spine = extract_spine(frame.graph, *extremities, frame.torso_node);
  if (spine.fallback || spine.nodes.empty()) return std::nullopt;
  std::vector<Vec3> spine_positions;
  for (int node : spine.nodes) spine_positions.push_back(frame.graph.nodes[node]);

  const double r_tr = trunk_radius(frame.binary, frame.graph, spine, config.trunk_radius_factor);
  const Vec3 head_dir = frame.graph.nodes[extremities->head] - frame.torso_position;
  Mat3 rotation;
  try {
    rotation = torso_orientation(frame.binary, spine_positions, r_tr, head_dir,
                                 previous_rotation);
  } catch (const std::runtime_error&) {
    return std::nullopt;
  }
  rotation_out = rotation;

  // trunk bounding box: spine extent expanded by the trunk radius
  Vec3 box_lo = spine_positions.front(), box_hi = spine_positions.front();
  for (const auto& p : spine_positions) {
    box_lo = box_lo.cwiseMin(p);
    box_hi = box_hi.cwiseMax(p);
  }
  box_lo -= Vec3::Constant(r_tr);
  box_hi += Vec3::Constant(r_tr);

  // left/right by the lateral projection, as in tracking
  auto ext = *extremities;
  const Vec3 lateral = rotation.col(1);
  auto order = [&](std::array<int, 2>& pair) {
    const double s0 = (frame.graph.nodes[pair[0]] - frame.torso_position).dot(lateral);
    const double s1 = (frame.graph.nodes[pair[1]] - frame.torso_position).dot(lateral);
    if (s1 > s0) std::swap(pair[0], pair[1]);
  };
  order(ext.wrists);
  order(ext.ankles);

  CalibSample sample;
  const auto geodesics = frame.graph.geodesics_from(frame.torso_node);
  sample.geodesic_head = geodesics[ext.head];

  const Mat3 world_to_torso = rotation.transpose();
  std::array<Vec3, 2> shoulder_pos, hip_pos;

  for (int side = 0; side < 2; ++side) {
    // arms
    {
      const auto path = frame.graph.path(frame.torso_node, ext.wrists[side]);
      const auto crossing = box_crossing(frame.graph, path, box_lo, box_hi);
      if (!crossing) return std::nullopt;
      shoulder_pos[side] = *crossing;
      const Vec3 wrist = frame.graph.nodes[ext.wrists[side]];
      // Eq-style maximum deviation finds the elbow in X-pose
      std::vector<Vec3> limb_nodes;
      for (int node : path) {
        const Vec3 p = frame.graph.nodes[node];
        if ((p - *crossing).dot(wrist - *crossing) >= 0 &&
            (p - frame.torso_position).norm() >= (*crossing - frame.torso_position).norm() * 0.5)
          limb_nodes.push_back(p);
      }
      if (limb_nodes.size() < 3) return std::nullopt;
      const auto [idx, dev] = max_deviation_node(limb_nodes, *crossing, wrist);
      if (dev < config.straight_limb_threshold_mm) return std::nullopt;  // limb too straight
      const Vec3 elbow = limb_nodes[idx];
      sample.upper_arm[side] = (elbow - *crossing).norm();
      sample.forearm[side] = (wrist - elbow).norm();
      sample.geodesic_wrist[side] = geodesics[ext.wrists[side]];
    }
    // legs
    {
      const auto path = frame.graph.path(frame.torso_node, ext.ankles[side]);
      const auto crossing = box_crossing(frame.graph, path, box_lo, box_hi);
      if (!crossing) return std::nullopt;
      hip_pos[side] = *crossing;
      const Vec3 ankle = frame.graph.nodes[ext.ankles[side]];
      std::vector<Vec3> limb_nodes;
      for (int node : path) {
        const Vec3 p = frame.graph.nodes[node];
        if ((p - *crossing).dot(ankle - *crossing) >= 0 &&
            (p - frame.torso_position).norm() >= (*crossing - frame.torso_position).norm() * 0.5)
          limb_nodes.push_back(p);
      }
      if (limb_nodes.size() < 3) return std::nullopt;
      const auto [idx, dev] = max_deviation_node(limb_nodes, *crossing, ankle);
      if (dev < config.straight_limb_threshold_mm) return std::nullopt;
      const Vec3 knee = limb_nodes[idx];
      sample.thigh[side] = (knee - *crossing).norm();
      sample.shank[side] = (ankle - knee).norm();
      sample.geodesic_ankle[side] = geodesics[ext.ankles[side]];
    }
  }

  const Vec3 neck = 0.5 * (shoulder_pos[0] + shoulder_pos[1]);
  for (int side = 0; side < 2; ++side) {
    sample.local_shoulder[side] = world_to_torso * (shoulder_pos[side] - frame.torso_position);
    sample.local_hip[side] = world_to_torso * (hip_pos[side] - frame.torso_position);
  }
  sample.local_neck = world_to_torso * (neck - frame.torso_position);
  return sample;
}

bool window_consistent(std::span<const CalibSample> window, const MocapConfig& config) {
  const std::size_t q_count = window.front().lengths().size();
  for (std::size_t q = 0; q < q_count; ++q) {
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (const auto& s : window) {
      const double v = s.lengths()[q];
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    if (hi - lo > config.repeatability_mm) return false;
  }
  // left/right symmetry within 10%
  auto symmetric = [](double a, double b) { return std::abs(a - b) <= 0.1 * std::max(a, b); };
  for (const auto& s : window) {
    if (!symmetric(s.upper_arm[0], s.upper_arm[1]) || !symmetric(s.forearm[0], s.forearm[1]) ||
        !symmetric(s.thigh[0], s.thigh[1]) || !symmetric(s.shank[0], s.shank[1]))
      return false;
  }
  return true;
}

}  // namespace

BodyCalibration calibrate_user(std::span<const FrameAnalysis> frames, const Vec3& up,
                               const MocapConfig& config) {
  std::vector<CalibSample> run;  // consecutive valid samples
  std::optional<Mat3> previous_rotation;

  for (const auto& frame : frames) {
    Mat3 rotation;
    const auto sample = measure_frame(frame, up, config,
                                      previous_rotation ? &*previous_rotation : nullptr, rotation);
    if (!sample) {
      run.clear();
      continue;
    }
    previous_rotation = rotation;
    run.push_back(*sample);
    if (static_cast<int>(run.size()) < config.calibration_window) continue;

    const std::span<const CalibSample> window(run.end() - config.calibration_window,
                                              run.end());
    if (!window_consistent(window, config)) continue;

    // accepted: average the window
    BodyCalibration out;
    const double n = static_cast<double>(window.size());
    for (const auto& s : window) {
      for (int side = 0; side < 2; ++side) {
        out.upper_arm[side] += s.upper_arm[side] / n;
        out.forearm[side] += s.forearm[side] / n;
        out.thigh[side] += s.thigh[side] / n;
        out.shank[side] += s.shank[side] / n;
        out.geodesic_wrist[side] += s.geodesic_wrist[side] / n;
        out.geodesic_ankle[side] += s.geodesic_ankle[side] / n;
        out.local_shoulder[side] += s.local_shoulder[side] / n;
        out.local_hip[side] += s.local_hip[side] / n;
      }
      out.geodesic_head += s.geodesic_head / n;
      out.local_neck += s.local_neck / n;
    }
    return out;
  }
  throw std::runtime_error(
      "calibrate_user: repeatability never satisfied within the frame sequence");
}

}  // namespace volcap::mocap
