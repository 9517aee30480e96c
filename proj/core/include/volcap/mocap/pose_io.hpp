// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "volcap/mocap/track.hpp"

#include <filesystem>
#include <vector>

namespace volcap::mocap {

void write_calibration(const std::filesystem::path& path, const BodyCalibration& calibration);
BodyCalibration read_calibration(const std::filesystem::path& path);

/// skeleton.jsonl: one JSON object per line with frame id, validity, the
/// 15 joints (mm) and the torso rotation.
void write_skeleton_stream(const std::filesystem::path& path,
                           std::span<const SkeletonPose> poses);
std::vector<SkeletonPose> read_skeleton_stream(const std::filesystem::path& path);

/// angles.csv: frame, joint, degrees for the four link joints.
void write_angles_csv(const std::filesystem::path& path, std::span<const SkeletonPose> poses);

}  // namespace volcap::mocap
