#include "hoifit/contact.hpp"

#include <cmath>
#include <fstream>

#include <nlohmann/json.hpp>

#include "hoifit/raycast.hpp"

namespace hoifit {

size_t ContactSet::front_count() const {
  size_t n = 0;
  for (const auto& p : pairs) {
    if (p.label == ContactLabel::Front) ++n;
  }
  return n;
}

size_t ContactSet::back_count() const { return pairs.size() - front_count(); }

std::vector<ContactLabel> classify_front_back(const std::vector<Vec3>& normals,
                                              const CameraModel& camera) {
  std::vector<ContactLabel> labels(normals.size());
  for (size_t i = 0; i < normals.size(); ++i) {
    double z = (camera.R * normals[i]).z();
    labels[i] = z > 0.0 ? ContactLabel::Back : ContactLabel::Front;
  }
  return labels;
}

ContactSet match_contacts(const PosedHand& hand, const HandModelDef& model,
                          const MeshSdf& object, const Pose6D& object_pose,
                          const CameraModel& camera, int frame) {
  ContactSet set;
  set.frame = frame;

  ContactCandidates cand = contact_candidates(model, hand);
  auto projected = project_points(camera, cand.positions);
  auto labels = classify_front_back(cand.normals, camera);

  const Vec3 cam_center = camera.center();
  const Rigid inv_pose = object_pose.to_rigid().inverse();
  const Vec3 org_local = inv_pose * cam_center;
  const Mat3 to_local = inv_pose.R * camera.R.transpose() * camera.K.inverse();

  for (size_t i = 0; i < cand.indices.size(); ++i) {
    if (!projected[i].valid) continue;
    // Nearest pixel of the continuous projection; pixel (u, v) is centered
    // at (u + 0.5, v + 0.5).
    int u = static_cast<int>(std::floor(projected[i].pixel.x()));
    int v = static_cast<int>(std::floor(projected[i].pixel.y()));
    if (u < 0 || u >= camera.width || v < 0 || v >= camera.height) continue;

    // The silhouette membership test and the object-point resolution share
    // one ray from the camera center through the pixel center.
    Vec3 dir_local = (to_local * Vec3(u + 0.5, v + 0.5, 1.0)).normalized();
    auto hits = object.bvh().all_hits(org_local, dir_local);
    if (hits.empty()) continue;  // outside the rendered mask, or grazing miss

    const RayHit& chosen =
        labels[i] == ContactLabel::Front ? hits.front() : hits.back();

    ContactPair pair;
    pair.hand_vertex = cand.indices[i];
    pair.hand_point = cand.positions[i];
    pair.object_point = object_pose.apply(org_local + chosen.t * dir_local);
    pair.label = labels[i];
    pair.pixel_u = u;
    pair.pixel_v = v;
    set.pairs.push_back(pair);
  }
  return set;
}

ContactSet match_contacts(const PosedHand& hand, const HandModelDef& model,
                          const TriMesh& object, const Pose6D& object_pose,
                          const CameraModel& camera, int frame) {
  MeshSdf sdf(object);
  return match_contacts(hand, model, sdf, object_pose, camera, frame);
}

void save_contacts_json(const std::vector<ContactSet>& contacts,
                        const std::filesystem::path& path) {
  nlohmann::json j = nlohmann::json::array();
  for (const auto& set : contacts) {
    nlohmann::json pairs = nlohmann::json::array();
    for (const auto& p : set.pairs) {
      pairs.push_back({
          {"hand_vertex", p.hand_vertex},
          {"hand_point", {p.hand_point.x(), p.hand_point.y(), p.hand_point.z()}},
          {"object_point", {p.object_point.x(), p.object_point.y(), p.object_point.z()}},
          {"label", p.label == ContactLabel::Front ? "front" : "back"},
          {"pixel", {p.pixel_u, p.pixel_v}},
      });
    }
    j.push_back({{"frame", set.frame}, {"pairs", pairs}});
  }
  std::ofstream out(path);
  if (!out) throw std::runtime_error(path.string() + ": cannot open for writing");
  out << j.dump(2) << "\n";
}

}  // namespace hoifit
