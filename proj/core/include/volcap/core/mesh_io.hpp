// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "volcap/core/mesh.hpp"

#include <filesystem>

namespace volcap {

/// ASCII OBJ. Positions and normals use the standard statements; attribute
/// channels (per-view UVs, blend weights) are written as comment-extension
/// blocks of the form
///   #channel <name> <components> <vertex-count>
///   #c <v0...>          (one line per vertex)
void write_obj(const std::filesystem::path& path, const TriMesh& mesh);
TriMesh read_obj(const std::filesystem::path& path);

/// Binary little-endian PLY; attribute channels become extra per-vertex
/// float properties named <name>_0.., so files stay readable by standard
/// viewers.
void write_ply(const std::filesystem::path& path, const TriMesh& mesh);
TriMesh read_ply(const std::filesystem::path& path);

/// ASCII PLY point cloud (positions only), used for ground-truth surface
/// samples.
void write_ply_points(const std::filesystem::path& path, const std::vector<Vec3>& points);
std::vector<Vec3> read_ply_points(const std::filesystem::path& path);

}  // namespace volcap
