// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "volcap/core/skeleton.hpp"
#include "volcap/core/types.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace volcap::synth {

using volcap::Joint;
using volcap::kBoneCount;
using volcap::kBones;
using volcap::kJointCount;
using volcap::kJointNames;

/// Articulated body made of sphere-swept segments: analytic signed
/// distance, analytic ray intersection, unambiguous ground-truth skeleton.
struct CapsuleBody {
  std::array<Vec3, kJointCount> joints{};       // mm
  std::array<double, kBoneCount> radii{};       // mm
  std::array<Rgb8, kBoneCount> colors{};

  /// The five extremities' geodesic path lengths to the torso along the
  /// bone tree.
  std::array<double, 5> extremity_geodesics() const;  // head, wristL, wristR, ankleL, ankleR
  double bone_length(int bone) const { return (joints[kBones[bone][0]] - joints[kBones[bone][1]]).norm(); }
};

/// Exact signed distance to the union of capsules (negative inside).
double sdf(const CapsuleBody& body, const Vec3& x);

struct RayHit {
  double t = 0;     // distance along the unit ray direction
  int bone = -1;
  Vec3 point;       // world
  Vec3 normal;      // unit, outward
};

/// First intersection of the ray origin + t*dir (dir unit) with the body.
std::optional<RayHit> intersect(const CapsuleBody& body, const Vec3& origin, const Vec3& dir);

/// Uniform-density samples of the union surface (points strictly on the
/// outer boundary). Deterministic for a given seed.
std::vector<Vec3> sample_surface(const CapsuleBody& body, int count, std::uint64_t seed);

/// Default subject in X-pose: limbs spread, elbows/knees slightly bent,
/// left/right limb lengths a few percent apart so all five extremities
/// have pairwise-distinct geodesic lengths to torso.
CapsuleBody make_xpose_body();

/// Kick sequence: same subject, right leg swings forward while the knee
/// flexes and extends over the given frame count.
std::vector<CapsuleBody> make_kick_sequence(int frames);

/// Knee flexion angle (degrees) between thigh and shank at the given side.
double knee_angle_deg(const CapsuleBody& body, bool right);

}  // namespace volcap::synth
