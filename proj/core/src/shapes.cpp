#include "hoifit/shapes.hpp"

#include <cmath>
#include <map>

namespace hoifit {

TriMesh make_icosphere(double radius, int subdivisions, const Vec3& center) {
  const double phi = (1.0 + std::sqrt(5.0)) / 2.0;
  TriMesh mesh;
  mesh.vertices = {
      {-1, phi, 0}, {1, phi, 0}, {-1, -phi, 0}, {1, -phi, 0},
      {0, -1, phi}, {0, 1, phi}, {0, -1, -phi}, {0, 1, -phi},
      {phi, 0, -1}, {phi, 0, 1}, {-phi, 0, -1}, {-phi, 0, 1},
  };
  mesh.faces = {
      {0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11},
      {1, 5, 9},  {5, 11, 4}, {11, 10, 2}, {10, 7, 6}, {7, 1, 8},
      {3, 9, 4},  {3, 4, 2},  {3, 2, 6},   {3, 6, 8},  {3, 8, 9},
      {4, 9, 5},  {2, 4, 11}, {6, 2, 10},  {8, 6, 7},  {9, 8, 1},
  };
  for (auto& v : mesh.vertices) v.normalize();

  for (int s = 0; s < subdivisions; ++s) {
    std::map<std::pair<int, int>, int> midpoint;
    auto mid = [&](int a, int b) {
      auto key = std::minmax(a, b);
      auto it = midpoint.find(key);
      if (it != midpoint.end()) return it->second;
      Vec3 m = (mesh.vertices[a] + mesh.vertices[b]).normalized();
      int idx = static_cast<int>(mesh.vertices.size());
      mesh.vertices.push_back(m);
      midpoint.emplace(key, idx);
      return idx;
    };
    std::vector<FaceIndices> refined;
    refined.reserve(mesh.faces.size() * 4);
    for (const auto& f : mesh.faces) {
      int ab = mid(f[0], f[1]);
      int bc = mid(f[1], f[2]);
      int ca = mid(f[2], f[0]);
      refined.push_back({f[0], ab, ca});
      refined.push_back({f[1], bc, ab});
      refined.push_back({f[2], ca, bc});
      refined.push_back({ab, bc, ca});
    }
    mesh.faces = std::move(refined);
  }

  for (auto& v : mesh.vertices) v = center + radius * v;
  return mesh;
}

TriMesh make_box(const Vec3& h, const Vec3& center) {
  TriMesh mesh;
  mesh.vertices = {
      {-h.x(), -h.y(), -h.z()}, {h.x(), -h.y(), -h.z()},
      {h.x(), h.y(), -h.z()},   {-h.x(), h.y(), -h.z()},
      {-h.x(), -h.y(), h.z()},  {h.x(), -h.y(), h.z()},
      {h.x(), h.y(), h.z()},    {-h.x(), h.y(), h.z()},
  };
  mesh.faces = {
      {0, 2, 1}, {0, 3, 2},  // -z
      {4, 5, 6}, {4, 6, 7},  // +z
      {0, 1, 5}, {0, 5, 4},  // -y
      {2, 3, 7}, {2, 7, 6},  // +y
      {1, 2, 6}, {1, 6, 5},  // +x
      {3, 0, 4}, {3, 4, 7},  // -x
  };
  for (auto& v : mesh.vertices) v += center;
  return mesh;
}

TriMesh make_capped_tube(double radius, double length, int sides, int rings) {
  TriMesh mesh;
  // Ring vertices bottom to top, then the two cap centers.
  for (int r = 0; r <= rings; ++r) {
    double z = length * static_cast<double>(r) / rings;
    for (int s = 0; s < sides; ++s) {
      double a = 2.0 * kPi * s / sides;
      mesh.vertices.push_back(Vec3(radius * std::cos(a), radius * std::sin(a), z));
    }
  }
  int bottom_center = static_cast<int>(mesh.vertices.size());
  mesh.vertices.push_back(Vec3(0, 0, 0));
  int top_center = bottom_center + 1;
  mesh.vertices.push_back(Vec3(0, 0, length));

  auto ring_vertex = [sides](int r, int s) { return r * sides + (s % sides); };
  for (int r = 0; r < rings; ++r) {
    for (int s = 0; s < sides; ++s) {
      int a = ring_vertex(r, s), b = ring_vertex(r, s + 1);
      int c = ring_vertex(r + 1, s + 1), d = ring_vertex(r + 1, s);
      mesh.faces.push_back({a, b, c});
      mesh.faces.push_back({a, c, d});
    }
  }
  for (int s = 0; s < sides; ++s) {
    mesh.faces.push_back({bottom_center, ring_vertex(0, s + 1), ring_vertex(0, s)});
    mesh.faces.push_back({top_center, ring_vertex(rings, s), ring_vertex(rings, s + 1)});
  }
  return mesh;
}

}  // namespace hoifit
