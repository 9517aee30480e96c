// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "volcap/core/image.hpp"

#include <filesystem>

namespace volcap {

/// PNG I/O. Depth maps are 16-bit grayscale (millimeters), color is 8-bit
/// RGB. Writes are deterministic for identical inputs.
void write_png(const std::filesystem::path& path, const ColorImage& img);
void write_png(const std::filesystem::path& path, const DepthImage& img);
ColorImage read_color_png(const std::filesystem::path& path);
DepthImage read_depth_png(const std::filesystem::path& path);

}  // namespace volcap
