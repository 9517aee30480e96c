// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "volcap/core/types.hpp"

#include <array>
#include <string>

namespace volcap {

/// The 15 tracked joints. Torso, neck, shoulders and hips form the
/// rigid-body part; each limb contributes a link joint and an extremity.
enum Joint : int {
  kTorso = 0, kNeck, kHead,
  kShoulderL, kElbowL, kWristL,
  kShoulderR, kElbowR, kWristR,
  kHipL, kKneeL, kAnkleL,
  kHipR, kKneeR, kAnkleR,
  kJointCount
};

extern const std::array<std::string, kJointCount> kJointNames;

/// Parent-child joint pairs forming the body tree.
constexpr int kBoneCount = 14;
extern const std::array<std::array<int, 2>, kBoneCount> kBones;

}  // namespace volcap
