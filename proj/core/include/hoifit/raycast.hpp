#pragma once

#include <vector>

#include "hoifit/bvh.hpp"
#include "hoifit/camera.hpp"
#include "hoifit/pose.hpp"

namespace hoifit {

/// All intersections of a world-space ray with a rigidly posed mesh, sorted
/// ascending, duplicates merged. `direction` must be unit length. For a
/// watertight mesh and a ray not tangent to any edge the count is even.
std::vector<RayHit> ray_mesh_intersections(const Vec3& origin, const Vec3& direction,
                                           const TriangleBvh& bvh, const Pose6D& pose);
std::vector<RayHit> ray_mesh_intersections(const Vec3& origin, const Vec3& direction,
                                           const TriMesh& mesh, const Pose6D& pose);

struct BinaryMask {
  int width = 0;
  int height = 0;
  std::vector<uint8_t> data;  // row-major, nonzero = covered

  bool at(int u, int v) const { return data[static_cast<size_t>(v) * width + u] != 0; }
  void set(int u, int v, bool value) {
    data[static_cast<size_t>(v) * width + u] = value ? 255 : 0;
  }
  size_t count() const;

  static BinaryMask zeros(int width, int height);
};

/// Per-pixel-center ray-cast silhouette of the posed mesh. A pixel (u, v) is
/// set iff the camera ray through its center (u + 0.5, v + 0.5) intersects
/// the mesh, so the mask agrees with ray_mesh_intersections exactly.
BinaryMask render_object_mask(const TriangleBvh& bvh, const Pose6D& pose,
                              const CameraModel& camera);
BinaryMask render_object_mask(const TriMesh& mesh, const Pose6D& pose,
                              const CameraModel& camera);

/// Depth of the nearest surface along each pixel ray, in meters of
/// camera-frame z; invalid (0) where the ray misses. Rays pass through the
/// integer pixel coordinate (u, v) so rendered depth back-projects exactly.
DepthFrame render_depth(const TriangleBvh& bvh, const Pose6D& pose,
                        const CameraModel& camera);

}  // namespace hoifit
