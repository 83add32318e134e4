#pragma once

#include "hoifit/bvh.hpp"
#include "hoifit/pose.hpp"

namespace hoifit {

/// Signed distance queries against a watertight triangle mesh. Magnitude is
/// the exact point-to-surface distance via the BVH; the sign comes from
/// ray-crossing parity with a 3-ray majority vote. Read-only after
/// construction and safe to query concurrently.
class MeshSdf {
 public:
  MeshSdf() = default;
  /// Throws std::invalid_argument("sign undefined: mesh not watertight")
  /// unless the mesh is watertight.
  explicit MeshSdf(const TriMesh& mesh);
  explicit MeshSdf(TriangleBvh bvh);

  const TriangleBvh& bvh() const { return bvh_; }

  /// Signed distance in the mesh frame: positive outside, negative inside.
  double signed_distance(const Vec3& point) const;

  /// Signed distance to the mesh posed rigidly in world coordinates.
  double signed_distance(const Vec3& point_world, const Pose6D& pose) const;

  struct Query {
    double signed_distance = 0.0;
    Vec3 closest_point = Vec3::Zero();  // same frame as the query point
    Vec3 gradient = Vec3::Zero();       // d(signed_distance)/d(point), unit
    bool inside = false;
  };

  /// Distance plus the spatial gradient taken from the closest-point
  /// direction (points from inside toward outside on both sides).
  Query query(const Vec3& point) const;
  Query query_world(const Vec3& point_world, const Pose6D& pose) const;

  bool inside(const Vec3& point) const;

  /// Conservative outside test: beyond the bounding sphere the point cannot
  /// be inside or near the surface; penetration-only losses skip the query.
  bool certainly_outside(const Vec3& point) const {
    return (point - bound_center_).squaredNorm() > bound_radius_sq_;
  }

 private:
  TriangleBvh bvh_;
  Vec3 bound_center_ = Vec3::Zero();
  double bound_radius_sq_ = 0.0;
};

/// Convenience wrapper matching the one-shot operation shape; builds the BVH
/// per call, so use MeshSdf directly in loops.
double signed_distance(const TriMesh& mesh, const Pose6D& pose, const Vec3& point_world);

}  // namespace hoifit
