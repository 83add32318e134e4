#pragma once

#include <filesystem>
#include <string>

#include "hoifit/mesh.hpp"

namespace hoifit {

/// Wavefront OBJ, triangles only, meters. Faces with texture/normal slashes
/// are accepted on read; only positions and faces are written.
TriMesh load_obj(const std::filesystem::path& path);
void save_obj(const TriMesh& mesh, const std::filesystem::path& path);

/// Binary little-endian PLY, triangles only, float or double positions,
/// optional uchar vertex colors.
TriMesh load_ply(const std::filesystem::path& path);
void save_ply(const TriMesh& mesh, const std::filesystem::path& path);

/// Point cloud as binary PLY (vertices only).
void save_point_cloud_ply(const std::vector<Vec3>& points,
                          const std::filesystem::path& path);

/// Dispatch on extension (.obj / .ply).
TriMesh load_mesh(const std::filesystem::path& path);
void save_mesh(const TriMesh& mesh, const std::filesystem::path& path);

}  // namespace hoifit
