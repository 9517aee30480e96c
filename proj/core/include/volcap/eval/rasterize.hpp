// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "volcap/appearance/color.hpp"
#include "volcap/appearance/texture.hpp"
#include "volcap/core/image.hpp"

#include <vector>

namespace volcap::eval {

struct RenderedView {
  Image<float> depth;      // mm; 0 where nothing was drawn
  ColorImage color;
  MaskImage silhouette;    // pixels with drawn depth
};

enum class RenderMode {
  kUvBlend,         // per-pixel blend of the visible views' textures
  kColorPerVertex,  // equal-weight per-vertex colors, interpolated
};

/// Perspective-correct z-buffered triangle rasterization of the textured
/// mesh into a camera. `view_images` are the (color-corrected) RGB images
/// of the reconstruction sensors; a sensor contributes to a triangle only
/// when all three corners see it. Pixels covered by no view render light
/// gray. Triangles reaching behind the near plane (1 mm) are dropped.
RenderedView rasterize(const appearance::TexturedMesh& mesh, const CameraView& camera,
                       const std::vector<ColorImage>& view_images, RenderMode mode);

}  // namespace volcap::eval
