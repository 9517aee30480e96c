// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "volcap/core/mesh.hpp"
#include "volcap/core/volume.hpp"

namespace volcap::recon {

/// Extracts the isosurface A(q) = L as a triangle mesh in world
/// coordinates, with linear interpolation along cell edges and shared
/// vertices welded exactly. The 256-case table resolves every ambiguous
/// face by the same sign rule, so the output is watertight (every edge in
/// exactly two triangles) on any grid whose boundary stays outside the
/// surface. Vertex normals come from the interpolated volume gradient,
/// pointing from the interior (A above L) outward.
TriMesh marching_cubes(const VolumeGrid<double>& volume, double level);

}  // namespace volcap::recon
