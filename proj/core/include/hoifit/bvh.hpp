#pragma once

#include <memory>
#include <vector>

#include "hoifit/mesh.hpp"
#include "hoifit/types.hpp"

namespace hoifit {

/// One ray-surface crossing. Distances in a deduplicated hit list are
/// strictly increasing.
struct RayHit {
  double t = 0.0;       // distance along the (unit) ray direction, meters
  int face = -1;
  Vec3 point = Vec3::Zero();  // world-space intersection point
  bool entering = false;      // true when the ray opposes the face normal
};

struct ClosestPointResult {
  double distance = 0.0;
  Vec3 point = Vec3::Zero();  // closest point on the surface
  int face = -1;
};

constexpr double kRayEpsilon = 1e-9;  // minimum accepted hit distance, meters
constexpr double kHitMergeEpsilon = 1e-7;  // duplicate-hit merge window, meters

/// Closest point on a single triangle to a query point.
Vec3 closest_point_on_triangle(const Vec3& p, const Vec3& a, const Vec3& b, const Vec3& c);

/// Watertight ray/triangle test (shear-and-scale formulation). Edges shared
/// by two triangles resolve consistently: a ray through a shared edge reports
/// a hit on both faces at the same distance, which the caller merges.
bool ray_triangle_watertight(const Vec3& org, const Vec3& dir,
                             const Vec3& a, const Vec3& b, const Vec3& c,
                             double& t_out);

/// Midpoint-split AABB tree over one triangle mesh. Queries are read-only
/// and safe to run concurrently once built.
class TriangleBvh {
 public:
  TriangleBvh() = default;
  explicit TriangleBvh(const TriMesh& mesh);

  bool empty() const { return nodes_.empty(); }
  const TriMesh& mesh() const { return *mesh_; }

  /// All intersections with t > kRayEpsilon, sorted ascending, duplicates
  /// within kHitMergeEpsilon merged. `dir` must be unit length.
  std::vector<RayHit> all_hits(const Vec3& org, const Vec3& dir) const;

  /// Number of crossings with t > kRayEpsilon after duplicate merging;
  /// cheaper than materializing hit points.
  int count_hits(const Vec3& org, const Vec3& dir) const;

  ClosestPointResult closest_point(const Vec3& p) const;

 private:
  struct Node {
    Vec3 lo, hi;
    int left = -1;    // interior: child index; leaf: first triangle
    int right = -1;   // interior: child index; leaf: -1
    int count = 0;    // leaf triangle count, 0 for interior nodes
  };

  void build(int node, int begin, int end, std::vector<int>& order,
             std::vector<Vec3>& centroids);
  void gather_hits(const Vec3& org, const Vec3& dir,
                   std::vector<RayHit>& hits) const;

  std::shared_ptr<const TriMesh> mesh_;
  std::vector<Node> nodes_;
  std::vector<int> tri_order_;  // triangle indices, leaf ranges contiguous
};

}  // namespace hoifit
