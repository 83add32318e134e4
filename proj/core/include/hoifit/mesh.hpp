#pragma once

#include <optional>
#include <string>
#include <vector>

#include "hoifit/types.hpp"

namespace hoifit {

/// Triangle mesh in meters. Watertightness (every edge shared by exactly two
/// consistently wound faces) is required wherever a signed distance or
/// inside/outside parity is taken.
struct TriMesh {
  std::vector<Vec3> vertices;
  std::vector<FaceIndices> faces;
  std::vector<Vec3> colors;  // optional, per vertex, empty when absent

  bool has_colors() const { return colors.size() == vertices.size(); }

  Vec3 face_normal(int face) const;   // unit, zero for degenerate faces
  double face_area(int face) const;
  Vec3 centroid() const;              // vertex centroid
  void bounds(Vec3& lo, Vec3& hi) const;

  /// Rigidly posed copy of the vertex set.
  std::vector<Vec3> posed_vertices(const Rigid& pose) const;
};

/// True iff every edge is shared by exactly two faces with consistent
/// winding (each directed edge appears exactly once).
bool mesh_is_watertight(const TriMesh& mesh);

struct VertexNormals {
  std::vector<Vec3> normals;      // unit length where valid, zero otherwise
  std::vector<uint8_t> valid;     // 0 for isolated/degenerate vertices
};

/// Area-weighted average of incident face normals, normalized per vertex.
VertexNormals vertex_normals(const TriMesh& mesh);
VertexNormals vertex_normals(const std::vector<Vec3>& vertices,
                             const std::vector<FaceIndices>& faces);

/// Signed volume via the divergence theorem; only meaningful for watertight
/// meshes with outward winding.
double mesh_volume(const TriMesh& mesh);

void validate_face_indices(const TriMesh& mesh);  // throws on out-of-range

}  // namespace hoifit
