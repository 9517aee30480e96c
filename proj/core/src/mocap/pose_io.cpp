// SPDX-License-Identifier: Apache-2.0
#include "volcap/mocap/pose_io.hpp"

#include <json.hpp>

#include <fstream>

namespace volcap::mocap {

using nlohmann::json;

namespace {

json vec_to_json(const Vec3& v) { return json::array({v.x(), v.y(), v.z()}); }
Vec3 vec_from_json(const json& j) {
  return Vec3(j.at(0).get<double>(), j.at(1).get<double>(), j.at(2).get<double>());
}

}  // namespace

void write_calibration(const std::filesystem::path& path, const BodyCalibration& c) {
  json j;
  j["upper_arm"] = c.upper_arm;
  j["forearm"] = c.forearm;
  j["thigh"] = c.thigh;
  j["shank"] = c.shank;
  j["geodesic_head"] = c.geodesic_head;
  j["geodesic_wrist"] = c.geodesic_wrist;
  j["geodesic_ankle"] = c.geodesic_ankle;
  j["local_shoulder"] = {vec_to_json(c.local_shoulder[0]), vec_to_json(c.local_shoulder[1])};
  j["local_hip"] = {vec_to_json(c.local_hip[0]), vec_to_json(c.local_hip[1])};
  j["local_neck"] = vec_to_json(c.local_neck);
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write calibration: " + path.string());
  out << j.dump(2) << '\n';
}

BodyCalibration read_calibration(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read calibration: " + path.string());
  const json j = json::parse(in);
  BodyCalibration c;
  for (int side = 0; side < 2; ++side) {
    c.upper_arm[side] = j.at("upper_arm").at(side);
    c.forearm[side] = j.at("forearm").at(side);
    c.thigh[side] = j.at("thigh").at(side);
    c.shank[side] = j.at("shank").at(side);
    c.geodesic_wrist[side] = j.at("geodesic_wrist").at(side);
    c.geodesic_ankle[side] = j.at("geodesic_ankle").at(side);
    c.local_shoulder[side] = vec_from_json(j.at("local_shoulder").at(side));
    c.local_hip[side] = vec_from_json(j.at("local_hip").at(side));
  }
  c.geodesic_head = j.at("geodesic_head");
  c.local_neck = vec_from_json(j.at("local_neck"));
  return c;
}

void write_skeleton_stream(const std::filesystem::path& path,
                           std::span<const SkeletonPose> poses) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write skeleton stream: " + path.string());
  for (const auto& pose : poses) {
    json j;
    j["frame"] = pose.frame_index;
    j["time_ms"] = pose.time_ms;
    j["valid"] = pose.valid;
    json joints = json::object();
    for (int i = 0; i < kJointCount; ++i) joints[kJointNames[i]] = vec_to_json(pose.joints[i]);
    j["joints"] = joints;
    json rot = json::array();
    for (int r = 0; r < 3; ++r)
      rot.push_back({pose.torso_rotation(r, 0), pose.torso_rotation(r, 1),
                     pose.torso_rotation(r, 2)});
    j["torso_rotation"] = rot;
    out << j.dump() << '\n';
  }
}

std::vector<SkeletonPose> read_skeleton_stream(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read skeleton stream: " + path.string());
  std::vector<SkeletonPose> poses;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const json j = json::parse(line);
    SkeletonPose pose;
    pose.frame_index = j.at("frame");
    pose.time_ms = j.at("time_ms");
    pose.valid = j.at("valid");
    for (int i = 0; i < kJointCount; ++i)
      pose.joints[i] = vec_from_json(j.at("joints").at(kJointNames[i]));
    for (int r = 0; r < 3; ++r)
      for (int c = 0; c < 3; ++c) pose.torso_rotation(r, c) = j.at("torso_rotation").at(r).at(c);
    poses.push_back(pose);
  }
  return poses;
}

void write_angles_csv(const std::filesystem::path& path, std::span<const SkeletonPose> poses) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write angles: " + path.string());
  out << "frame,joint,degrees\n";
  out.precision(6);
  out << std::fixed;
  const Joint links[4] = {kElbowL, kElbowR, kKneeL, kKneeR};
  for (const auto& pose : poses) {
    if (!pose.valid) continue;
    for (const Joint link : links)
      out << pose.frame_index << ',' << kJointNames[link] << ',' << joint_angle_deg(pose, link)
          << '\n';
  }
}

}  // namespace volcap::mocap
