// SPDX-License-Identifier: Apache-2.0
#include "volcap/mocap/track.hpp"

#include "pipeline.hpp"
#include "volcap/mocap/pose_io.hpp"

#include <doctest.h>

#include <numbers>

using namespace volcap;
using namespace volcap::mocap;

namespace {

VolumeGrid<double> cylinder_volume(const Vec3& center, const Vec3& axis, double radius,
                                   double length, int n, double edge) {
  VolumeGrid<double> vol(n, n, n, center - Vec3::Constant(edge * (n - 1) / 2), edge, 0.0);
  const Vec3 dir = axis.normalized();
  const Vec3 base = center - 0.5 * length * dir;
  for (int z = 0; z < n; ++z)
    for (int y = 0; y < n; ++y)
      for (int x = 0; x < n; ++x) {
        const Vec3 p = vol.voxel_center(x, y, z) - base;
        const double along = p.dot(dir);
        if (along < 0 || along > length) continue;
        if ((p - along * dir).norm() <= radius) vol.at(x, y, z) = 1.0;
      }
  return vol;
}

BinaryVolume to_binary(const VolumeGrid<double>& vol) { return binarize(vol, 0.5); }

// analyzed frames of the reconstructed X-pose scene, shared across cases
struct XposeFixture {
  synth::SyntheticScene scene;
  std::vector<FrameAnalysis> frames;
  VolumeGrid<double> volume;
  double level = 0;

  XposeFixture() : scene(synth::make_xpose_scene(1)) {
    recon::ReconConfig config;
    config.r = 6;
    const auto result = pipeline::run_frame(scene, 0, config);
    volume = result.recon.volume.values;
    level = result.recon.volume.iso_level;
    for (int i = 0; i < 12; ++i) frames.push_back(analyze_volume(volume, level));
  }
};

const XposeFixture& xpose_fixture() {
  static const XposeFixture fixture;
  return fixture;
}

}  // namespace

TEST_CASE("torso_orientation: upright cylinder trunk is vertical within 2 degrees") {
  const auto vol = cylinder_volume(Vec3(0, 1000, 0), Vec3(0, 1, 0), 140, 500, 48, 20.0);
  const auto binary = to_binary(vol);
  std::vector<Vec3> spine;
  for (int i = -8; i <= 8; ++i) spine.emplace_back(0, 1000 + 25.0 * i, 0);
  const Mat3 r = torso_orientation(binary, spine, 220.0, Vec3(0, 1, 0), nullptr);
  const double angle =
      std::acos(std::clamp(r.col(0).dot(Vec3(0, 1, 0)), -1.0, 1.0)) * 180.0 / std::numbers::pi;
  CHECK(angle < 2.0);
  CHECK(r.determinant() == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("torso_orientation: equivariant under a rigid rotation") {
  const Vec3 axis = Vec3(1, 2, 0.5).normalized();
  const Mat3 rot = Eigen::AngleAxisd(0.6, axis).toRotationMatrix();

  const auto vol = cylinder_volume(Vec3(0, 0, 0), Vec3(0, 1, 0), 140, 500, 48, 20.0);
  const auto binary = to_binary(vol);
  std::vector<Vec3> spine;
  for (int i = -8; i <= 8; ++i) spine.emplace_back(0, 25.0 * i, 0);
  const Mat3 r_base = torso_orientation(binary, spine, 220.0, Vec3(0, 1, 0), nullptr);

  const auto vol_rot = cylinder_volume(Vec3(0, 0, 0), rot * Vec3(0, 1, 0), 140, 500, 48, 20.0);
  const auto binary_rot = to_binary(vol_rot);
  std::vector<Vec3> spine_rot;
  for (const auto& s : spine) spine_rot.push_back(rot * s);
  const Mat3 r_got = torso_orientation(binary_rot, spine_rot, 220.0, rot * Vec3(0, 1, 0), nullptr);

  const double angle = std::acos(std::clamp((rot * r_base.col(0)).dot(r_got.col(0)), -1.0, 1.0)) *
                       180.0 / std::numbers::pi;
  CHECK(angle < 2.0);
}

TEST_CASE("torso_orientation: isotropic trunk takes the degenerate branch") {
  // a ball has no preferred axis
  VolumeGrid<double> vol(40, 40, 40, Vec3::Zero(), 10.0, 0.0);
  const Vec3 c = vol.voxel_center(19, 19, 19);
  for (int z = 0; z < 40; ++z)
    for (int y = 0; y < 40; ++y)
      for (int x = 0; x < 40; ++x)
        if ((vol.voxel_center(x, y, z) - c).norm() <= 150) vol.at(x, y, z) = 1.0;
  const auto binary = to_binary(vol);
  const std::vector<Vec3> spine = {c};
  const Mat3 previous = Eigen::AngleAxisd(0.3, Vec3(0, 0, 1)).toRotationMatrix();
  const Mat3 r = torso_orientation(binary, spine, 200.0, Vec3(0, 1, 0), &previous);
  CHECK((r - previous).cwiseAbs().maxCoeff() == 0.0);  // reused
  CHECK_THROWS(torso_orientation(binary, spine, 200.0, Vec3(0, 1, 0), nullptr));
}

TEST_CASE("place_rigid_body: identity at calibration pose, rigid under transforms") {
  BodyCalibration calib;
  calib.local_shoulder = {Vec3(-180, 200, 0), Vec3(180, 200, 0)};
  calib.local_hip = {Vec3(-100, -200, 0), Vec3(100, -200, 0)};
  calib.local_neck = Vec3(0, 230, 0);

  const Vec3 torso(10, 1000, -20);
  const auto at_identity = place_rigid_body(Mat3::Identity(), torso, calib);
  CHECK((at_identity.shoulder[0] - (torso + calib.local_shoulder[0])).norm() < 1e-12);
  CHECK((at_identity.neck - (torso + calib.local_neck)).norm() < 1e-12);

  // pure translation moves every joint equally
  const Vec3 shift(55, -30, 70);
  const auto translated = place_rigid_body(Mat3::Identity(), torso + shift, calib);
  CHECK((translated.hip[1] - (at_identity.hip[1] + shift)).norm() < 1e-12);

  // 90-degree yaw about the torso's up axis rotates the shoulder axis
  Mat3 yaw;
  yaw.col(0) = Vec3(0, 1, 0);
  yaw.col(1) = Vec3(0, 0, 1);
  yaw.col(2) = Vec3(1, 0, 0);
  // columns: up, lateral, front -> local x stays up, lateral becomes world z
  const auto yawed = place_rigid_body(yaw, torso, calib);
  const Vec3 shoulder_axis = yawed.shoulder[1] - yawed.shoulder[0];
  CHECK(shoulder_axis.normalized().dot(Vec3(0, 0, 1)) > 0.999);
}

TEST_CASE("calibrate_user: bone lengths within 10 percent of the capsule body") {
  const auto& fixture = xpose_fixture();
  const BodyCalibration calib = calibrate_user(fixture.frames, Vec3(0, 1, 0));

  const auto& body = fixture.scene.frames[0];
  auto blen = [&](int a, int b) { return (body.joints[a] - body.joints[b]).norm(); };
  // thigh and shank lengths against the generator's skeleton
  CHECK(calib.thigh[0] == doctest::Approx(blen(kHipL, kKneeL)).epsilon(0.10));
  CHECK(calib.thigh[1] == doctest::Approx(blen(kHipR, kKneeR)).epsilon(0.10));
  CHECK(calib.shank[0] == doctest::Approx(blen(kKneeL, kAnkleL)).epsilon(0.10));
  CHECK(calib.shank[1] == doctest::Approx(blen(kKneeR, kAnkleR)).epsilon(0.10));
  CHECK(calib.upper_arm[0] == doctest::Approx(blen(kShoulderL, kElbowL)).epsilon(0.10));
  CHECK(calib.upper_arm[1] == doctest::Approx(blen(kShoulderR, kElbowR)).epsilon(0.10));
  CHECK(calib.forearm[0] == doctest::Approx(blen(kElbowL, kWristL)).epsilon(0.10));
  CHECK(calib.forearm[1] == doctest::Approx(blen(kElbowR, kWristR)).epsilon(0.10));
}

TEST_CASE("calibrate_user: straight limbs are flagged and skipped") {
  // one skeleton frame with perfectly straight arms fails the deviation
  // threshold; with only such frames calibration cannot complete
  std::vector<FrameAnalysis> frames;
  for (int i = 0; i < 12; ++i) {
    FrameAnalysis f;
    std::vector<Vec3> nodes;
    auto chain = [&](const Vec3& a, const Vec3& b) {
      const int steps = std::max(1, static_cast<int>((b - a).norm() / 40.0));
      for (int s = 1; s <= steps; ++s)
        nodes.push_back(a + (b - a) * (static_cast<double>(s) / steps));
      return static_cast<int>(nodes.size()) - 1;
    };
    nodes.emplace_back(0, 1150, 0);
    chain(Vec3(0, 1150, 0), Vec3(0, 1400, 0));
    chain(Vec3(0, 1150, 0), Vec3(0, 950, 0));
    chain(Vec3(0, 1400, 0), Vec3(0, 1650, 0));
    chain(Vec3(0, 1400, 0), Vec3(-600, 1700, 0));  // perfectly straight arm
    chain(Vec3(0, 1400, 0), Vec3(600, 1700, 0));
    chain(Vec3(0, 950, 0), Vec3(-280, 150, 0));    // straight legs too
    chain(Vec3(0, 950, 0), Vec3(280, 150, 0));
    f.graph = build_mst(nodes, 150.0);
    f.torso_node = 0;
    f.torso_position = nodes[0];
    // minimal binary volume wrapped around the nodes
    f.binary.grid = VolumeGrid<std::uint8_t>(64, 64, 16, Vec3(-700, 0, -160), 30.0, 0);
    for (const auto& p : nodes) {
      const Vec3 v = f.binary.grid.to_voxel(p);
      for (int dz = -2; dz <= 2; ++dz)
        for (int dy = -2; dy <= 2; ++dy)
          for (int dx = -2; dx <= 2; ++dx) {
            const int x = static_cast<int>(v.x()) + dx, y = static_cast<int>(v.y()) + dy,
                      z = static_cast<int>(v.z()) + dz;
            if (f.binary.grid.in_bounds(x, y, z) && !f.binary.grid.at(x, y, z)) {
              f.binary.grid.at(x, y, z) = 1;
              f.binary.voxels.push_back({x, y, z});
            }
          }
    }
    frames.push_back(std::move(f));
  }
  CHECK_THROWS_AS(calibrate_user(frames, Vec3(0, 1, 0)), std::runtime_error);
}

TEST_CASE("track_frame: static X-pose joints within 60 mm of ground truth") {
  const auto& fixture = xpose_fixture();
  const BodyCalibration calib = calibrate_user(fixture.frames, Vec3(0, 1, 0));

  TrackerState state;
  const auto& body = fixture.scene.frames[0];
  for (int i = 0; i < 5; ++i) {
    const SkeletonPose pose = track_frame(fixture.volume, fixture.level, i * 33.0, i,
                                          Vec3(0, 1, 0), calib, state);
    REQUIRE(pose.valid);
    for (int j = 0; j < kJointCount; ++j) {
      INFO("joint ", kJointNames[j]);
      CHECK((pose.joints[j] - body.joints[j]).norm() < 60.0);
    }
  }
}

TEST_CASE("track_frame: empty volume marks the pose invalid and carries state") {
  const auto& fixture = xpose_fixture();
  const BodyCalibration calib = calibrate_user(fixture.frames, Vec3(0, 1, 0));
  TrackerState state;
  const auto good = track_frame(fixture.volume, fixture.level, 0.0, 0, Vec3(0, 1, 0), calib,
                                state);
  REQUIRE(good.valid);

  VolumeGrid<double> empty(16, 32, 16, Vec3::Zero(), 10.0, -1.0);
  const auto bad = track_frame(empty, std::nan(""), 33.0, 1, Vec3(0, 1, 0), calib, state);
  CHECK_FALSE(bad.valid);
  // carried state: joints stay at the filter's last positions
  for (int j = 0; j < kJointCount; ++j)
    CHECK((bad.joints[j] - state.filters[j].position).norm() < 1e-12);
}

TEST_CASE("joint angles are invariant under a global rigid transform") {
  SkeletonPose pose;
  pose.valid = true;
  const auto body = synth::make_xpose_body();
  for (int j = 0; j < kJointCount; ++j) pose.joints[j] = body.joints[j];
  const double base = joint_angle_deg(pose, kKneeR);

  const Mat3 rot = Eigen::AngleAxisd(1.1, Vec3(0.3, 1, -0.2).normalized()).toRotationMatrix();
  const Vec3 shift(300, -150, 800);
  SkeletonPose moved = pose;
  for (int j = 0; j < kJointCount; ++j) moved.joints[j] = rot * pose.joints[j] + shift;
  CHECK(joint_angle_deg(moved, kKneeR) == doctest::Approx(base).epsilon(1e-9));
}

TEST_CASE("calibration json round trip") {
  BodyCalibration calib;
  calib.upper_arm = {280, 273};
  calib.forearm = {255, 247};
  calib.thigh = {400, 392};
  calib.shank = {390, 382};
  calib.geodesic_head = 600;
  calib.geodesic_wrist = {1070, 1050};
  calib.geodesic_ankle = {930, 915};
  calib.local_shoulder = {Vec3(-180, 200, 5), Vec3(180, 200, -5)};
  calib.local_hip = {Vec3(-100, -200, 0), Vec3(100, -200, 0)};
  calib.local_neck = Vec3(0, 230, 1);

  const auto path = std::filesystem::temp_directory_path() / "volcap_calibration.json";
  write_calibration(path, calib);
  const auto loaded = read_calibration(path);
  CHECK(loaded.upper_arm[1] == doctest::Approx(273));
  CHECK((loaded.local_shoulder[0] - calib.local_shoulder[0]).norm() < 1e-12);
  CHECK(loaded.geodesic_ankle[0] == doctest::Approx(930));
}
