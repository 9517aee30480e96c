// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "volcap/core/types.hpp"

#include <filesystem>

namespace volcap {

/// rig.json: intrinsics and poses for every sensor, the K/K' split, and
/// the world up axis. Doubles round-trip exactly.
void write_rig(const std::filesystem::path& path, const CameraRig& rig);
CameraRig read_rig(const std::filesystem::path& path);

}  // namespace volcap
