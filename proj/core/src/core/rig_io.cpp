// SPDX-License-Identifier: Apache-2.0
#include "volcap/core/rig_io.hpp"

#include <json.hpp>

#include <fstream>

namespace volcap {
namespace {

using nlohmann::json;

json to_json(const Intrinsics& in) {
  return json{{"fx", in.fx}, {"fy", in.fy}, {"cx", in.cx}, {"cy", in.cy},
              {"width", in.width}, {"height", in.height}};
}

Intrinsics intrinsics_from(const json& j) {
  Intrinsics in;
  in.fx = j.at("fx");
  in.fy = j.at("fy");
  in.cx = j.at("cx");
  in.cy = j.at("cy");
  in.width = j.at("width");
  in.height = j.at("height");
  return in;
}

json to_json(const Pose& p) {
  json R = json::array();
  for (int r = 0; r < 3; ++r) R.push_back({p.R(r, 0), p.R(r, 1), p.R(r, 2)});
  return json{{"R", R}, {"t", {p.t.x(), p.t.y(), p.t.z()}}};
}

Pose pose_from(const json& j) {
  Pose p;
  const auto& R = j.at("R");
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) p.R(r, c) = R.at(r).at(c);
  const auto& t = j.at("t");
  p.t = Vec3(t.at(0), t.at(1), t.at(2));
  return p;
}

}  // namespace

void write_rig(const std::filesystem::path& path, const CameraRig& rig) {
  json j;
  j["up"] = {rig.up.x(), rig.up.y(), rig.up.z()};
  j["recon_count"] = rig.recon_count;
  j["sensors"] = json::array();
  for (const auto& s : rig.sensors) {
    j["sensors"].push_back(json{{"depth", to_json(s.depth_intr)},
                                {"pose", to_json(s.pose)},
                                {"rgb", to_json(s.rgb_intr)},
                                {"rgb_relative", to_json(s.rgb_relative)}});
  }
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write rig: " + path.string());
  out << j.dump(2) << '\n';
}

CameraRig read_rig(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read rig: " + path.string());
  json j = json::parse(in);
  CameraRig rig;
  const auto& up = j.at("up");
  rig.up = Vec3(up.at(0), up.at(1), up.at(2));
  rig.recon_count = j.at("recon_count");
  for (const auto& js : j.at("sensors")) {
    Sensor s;
    s.depth_intr = intrinsics_from(js.at("depth"));
    s.pose = pose_from(js.at("pose"));
    s.rgb_intr = intrinsics_from(js.at("rgb"));
    s.rgb_relative = pose_from(js.at("rgb_relative"));
    rig.sensors.push_back(s);
  }
  rig.validate();
  return rig;
}

}  // namespace volcap
