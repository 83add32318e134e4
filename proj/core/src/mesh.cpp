#include "hoifit/mesh.hpp"

#include <limits>
#include <stdexcept>
#include <unordered_map>

namespace hoifit {

Vec3 TriMesh::face_normal(int face) const {
  const auto& f = faces[face];
  Vec3 n = (vertices[f[1]] - vertices[f[0]]).cross(vertices[f[2]] - vertices[f[0]]);
  double len = n.norm();
  if (len <= 0.0) return Vec3::Zero();
  return n / len;
}

double TriMesh::face_area(int face) const {
  const auto& f = faces[face];
  return 0.5 * (vertices[f[1]] - vertices[f[0]]).cross(vertices[f[2]] - vertices[f[0]]).norm();
}

Vec3 TriMesh::centroid() const {
  Vec3 c = Vec3::Zero();
  for (const auto& v : vertices) c += v;
  return vertices.empty() ? c : Vec3(c / static_cast<double>(vertices.size()));
}

void TriMesh::bounds(Vec3& lo, Vec3& hi) const {
  lo = Vec3::Constant(std::numeric_limits<double>::max());
  hi = Vec3::Constant(std::numeric_limits<double>::lowest());
  for (const auto& v : vertices) {
    lo = lo.cwiseMin(v);
    hi = hi.cwiseMax(v);
  }
}

std::vector<Vec3> TriMesh::posed_vertices(const Rigid& pose) const {
  std::vector<Vec3> out(vertices.size());
  for (size_t i = 0; i < vertices.size(); ++i) out[i] = pose * vertices[i];
  return out;
}

namespace {

// Packs a directed edge into one key; vertex counts stay well below 2^32.
inline uint64_t edge_key(int a, int b) {
  return (static_cast<uint64_t>(static_cast<uint32_t>(a)) << 32) |
         static_cast<uint32_t>(b);
}

}  // namespace

bool mesh_is_watertight(const TriMesh& mesh) {
  if (mesh.faces.empty()) return false;
  std::unordered_map<uint64_t, int> directed;
  directed.reserve(mesh.faces.size() * 3);
  for (const auto& f : mesh.faces) {
    if (f[0] == f[1] || f[1] == f[2] || f[0] == f[2]) return false;
    for (int e = 0; e < 3; ++e) {
      int a = f[e];
      int b = f[(e + 1) % 3];
      if (++directed[edge_key(a, b)] > 1) return false;  // duplicated directed edge
    }
  }
  // Consistent winding: every directed edge must have its exact reverse.
  for (const auto& [key, count] : directed) {
    (void)count;
    int a = static_cast<int>(key >> 32);
    int b = static_cast<int>(key & 0xffffffffu);
    if (directed.find(edge_key(b, a)) == directed.end()) return false;
  }
  return true;
}

VertexNormals vertex_normals(const std::vector<Vec3>& vertices,
                             const std::vector<FaceIndices>& faces) {
  VertexNormals out;
  out.normals.assign(vertices.size(), Vec3::Zero());
  out.valid.assign(vertices.size(), 0);
  for (const auto& f : faces) {
    // Cross product magnitude carries the area weighting.
    Vec3 n = (vertices[f[1]] - vertices[f[0]]).cross(vertices[f[2]] - vertices[f[0]]);
    for (int k = 0; k < 3; ++k) out.normals[f[k]] += n;
  }
  for (size_t i = 0; i < vertices.size(); ++i) {
    double len = out.normals[i].norm();
    if (len > 1e-20) {
      out.normals[i] /= len;
      out.valid[i] = 1;
    } else {
      out.normals[i].setZero();
    }
  }
  return out;
}

VertexNormals vertex_normals(const TriMesh& mesh) {
  return vertex_normals(mesh.vertices, mesh.faces);
}

double mesh_volume(const TriMesh& mesh) {
  double vol = 0.0;
  for (const auto& f : mesh.faces) {
    vol += mesh.vertices[f[0]].dot(mesh.vertices[f[1]].cross(mesh.vertices[f[2]]));
  }
  return vol / 6.0;
}

void validate_face_indices(const TriMesh& mesh) {
  const int n = static_cast<int>(mesh.vertices.size());
  for (const auto& f : mesh.faces) {
    for (int k = 0; k < 3; ++k) {
      if (f[k] < 0 || f[k] >= n) {
        throw std::out_of_range("mesh face index out of range");
      }
    }
  }
}

}  // namespace hoifit
