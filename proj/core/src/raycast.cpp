#include "hoifit/raycast.hpp"

namespace hoifit {

std::vector<RayHit> ray_mesh_intersections(const Vec3& origin, const Vec3& direction,
                                           const TriangleBvh& bvh, const Pose6D& pose) {
  // Transform the ray into the mesh frame; rigid maps preserve distances, so
  // hit parameters t carry over unchanged.
  const Rigid inv = pose.to_rigid().inverse();
  const Vec3 org_local = inv * origin;
  const Vec3 dir_local = inv.R * direction;
  std::vector<RayHit> hits = bvh.all_hits(org_local, dir_local);
  for (auto& h : hits) h.point = origin + h.t * direction;
  return hits;
}

std::vector<RayHit> ray_mesh_intersections(const Vec3& origin, const Vec3& direction,
                                           const TriMesh& mesh, const Pose6D& pose) {
  return ray_mesh_intersections(origin, direction, TriangleBvh(mesh), pose);
}

size_t BinaryMask::count() const {
  size_t n = 0;
  for (uint8_t v : data) {
    if (v) ++n;
  }
  return n;
}

BinaryMask BinaryMask::zeros(int width, int height) {
  BinaryMask m;
  m.width = width;
  m.height = height;
  m.data.assign(static_cast<size_t>(width) * height, 0);
  return m;
}

BinaryMask render_object_mask(const TriangleBvh& bvh, const Pose6D& pose,
                              const CameraModel& camera) {
  BinaryMask mask = BinaryMask::zeros(camera.width, camera.height);
  const Rigid inv = pose.to_rigid().inverse();
  const Vec3 org_local = inv * camera.center();
  const Mat3 to_local = inv.R * camera.R.transpose() * camera.K.inverse();
  for (int v = 0; v < camera.height; ++v) {
    for (int u = 0; u < camera.width; ++u) {
      Vec3 dir_local = (to_local * Vec3(u + 0.5, v + 0.5, 1.0)).normalized();
      if (bvh.count_hits(org_local, dir_local) > 0) mask.set(u, v, true);
    }
  }
  return mask;
}

BinaryMask render_object_mask(const TriMesh& mesh, const Pose6D& pose,
                              const CameraModel& camera) {
  return render_object_mask(TriangleBvh(mesh), pose, camera);
}

DepthFrame render_depth(const TriangleBvh& bvh, const Pose6D& pose,
                        const CameraModel& camera) {
  DepthFrame depth = DepthFrame::zeros(camera.width, camera.height);
  const Rigid inv = pose.to_rigid().inverse();
  const Vec3 org_local = inv * camera.center();
  const Mat3 K_inv = camera.K.inverse();
  const Mat3 rot_local = inv.R * camera.R.transpose();
  for (int v = 0; v < camera.height; ++v) {
    for (int u = 0; u < camera.width; ++u) {
      Vec3 dir_cam = K_inv * Vec3(u, v, 1.0);
      double cam_scale = dir_cam.norm();
      Vec3 dir_local = (rot_local * dir_cam) / cam_scale;
      auto hits = bvh.all_hits(org_local, dir_local);
      if (hits.empty()) continue;
      // Convert distance along the unit ray to camera-frame z.
      depth.at(u, v) = static_cast<float>(hits.front().t * dir_cam.z() / cam_scale);
    }
  }
  return depth;
}

}  // namespace hoifit
