// SPDX-License-Identifier: Apache-2.0
#include "volcap/core/skeleton.hpp"

namespace volcap {

const std::array<std::string, kJointCount> kJointNames = {
    "torso", "neck", "head",
    "shoulder_l", "elbow_l", "wrist_l",
    "shoulder_r", "elbow_r", "wrist_r",
    "hip_l", "knee_l", "ankle_l",
    "hip_r", "knee_r", "ankle_r"};

const std::array<std::array<int, 2>, kBoneCount> kBones = {{
    {kTorso, kNeck},
    {kNeck, kHead},
    {kNeck, kShoulderL}, {kShoulderL, kElbowL}, {kElbowL, kWristL},
    {kNeck, kShoulderR}, {kShoulderR, kElbowR}, {kElbowR, kWristR},
    {kTorso, kHipL}, {kHipL, kKneeL}, {kKneeL, kAnkleL},
    {kTorso, kHipR}, {kHipR, kKneeR}, {kKneeR, kAnkleR},
}};

}  // namespace volcap
