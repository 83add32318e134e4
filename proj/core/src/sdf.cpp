#include "hoifit/sdf.hpp"

#include <stdexcept>

namespace hoifit {

namespace {

// Fixed query directions for the parity vote, chosen not to align with axis
// planes or common mesh edges.
const Vec3 kParityDirs[3] = {
    Vec3(0.5424551667891301, 0.7633651164101917, 0.3511345624267777).normalized(),
    Vec3(-0.6793219378341489, 0.4237147651902515, 0.5992514182652231).normalized(),
    Vec3(0.1718297949737421, -0.5345236310691321, 0.8274127315944125).normalized(),
};

}  // namespace

namespace {

void compute_bound(const TriMesh& mesh, Vec3& center, double& radius_sq) {
  Vec3 lo, hi;
  mesh.bounds(lo, hi);
  center = 0.5 * (lo + hi);
  radius_sq = 0.25 * (hi - lo).squaredNorm();
}

}  // namespace

MeshSdf::MeshSdf(const TriMesh& mesh) {
  if (!mesh_is_watertight(mesh)) {
    throw std::invalid_argument("sign undefined: mesh not watertight");
  }
  bvh_ = TriangleBvh(mesh);
  compute_bound(bvh_.mesh(), bound_center_, bound_radius_sq_);
}

MeshSdf::MeshSdf(TriangleBvh bvh) : bvh_(std::move(bvh)) {
  if (!mesh_is_watertight(bvh_.mesh())) {
    throw std::invalid_argument("sign undefined: mesh not watertight");
  }
  compute_bound(bvh_.mesh(), bound_center_, bound_radius_sq_);
}

bool MeshSdf::inside(const Vec3& point) const {
  int votes = 0;
  for (const Vec3& dir : kParityDirs) {
    if (bvh_.count_hits(point, dir) % 2 == 1) ++votes;
  }
  return votes >= 2;
}

double MeshSdf::signed_distance(const Vec3& point) const {
  ClosestPointResult cp = bvh_.closest_point(point);
  return inside(point) ? -cp.distance : cp.distance;
}

double MeshSdf::signed_distance(const Vec3& point_world, const Pose6D& pose) const {
  return signed_distance(pose.to_rigid().inverse() * point_world);
}

MeshSdf::Query MeshSdf::query(const Vec3& point) const {
  Query q;
  ClosestPointResult cp = bvh_.closest_point(point);
  q.closest_point = cp.point;
  q.inside = inside(point);
  q.signed_distance = q.inside ? -cp.distance : cp.distance;
  Vec3 delta = point - cp.point;
  double len = delta.norm();
  if (len > 1e-12) {
    // The SDF gradient points outward on both sides of the surface.
    q.gradient = q.inside ? Vec3(-delta / len) : Vec3(delta / len);
  } else {
    q.gradient = bvh_.mesh().face_normal(cp.face);  // on-surface fallback
  }
  return q;
}

MeshSdf::Query MeshSdf::query_world(const Vec3& point_world, const Pose6D& pose) const {
  const Rigid world_from_mesh = pose.to_rigid();
  const Rigid mesh_from_world = world_from_mesh.inverse();
  Query q = query(mesh_from_world * point_world);
  q.closest_point = world_from_mesh * q.closest_point;
  q.gradient = world_from_mesh.R * q.gradient;
  return q;
}

double signed_distance(const TriMesh& mesh, const Pose6D& pose, const Vec3& point_world) {
  MeshSdf sdf(mesh);
  return sdf.signed_distance(point_world, pose);
}

}  // namespace hoifit
