#pragma once

#include <filesystem>

#include "hoifit/camera.hpp"
#include "hoifit/hand_model.hpp"
#include "hoifit/sdf.hpp"

namespace hoifit {

enum class ContactLabel : uint8_t { Front, Back };

/// One matched hand-candidate / object-surface-point pair.
struct ContactPair {
  int hand_vertex = -1;          // index into the hand vertex array
  Vec3 hand_point = Vec3::Zero();    // posed candidate position, world
  Vec3 object_point = Vec3::Zero();  // ray intersection on the object, world
  ContactLabel label = ContactLabel::Front;
  int pixel_u = 0;
  int pixel_v = 0;
};

struct ContactSet {
  int frame = -1;
  std::vector<ContactPair> pairs;

  size_t front_count() const;
  size_t back_count() const;
  bool empty() const { return pairs.empty(); }
};

/// Camera-frame z sign of each unit normal: z > 0 faces away from the
/// camera (back), z < 0 faces it (front); z == 0 resolves to front.
std::vector<ContactLabel> classify_front_back(const std::vector<Vec3>& normals,
                                              const CameraModel& camera);

/// Fig.-3 style 2D-to-3D contact matching:
///   1. project the model's contact candidates,
///   2. keep those whose nearest pixel is covered by the object silhouette,
///   3. classify front/back from posed candidate normals,
///   4. cast the camera ray through the pixel center: front takes the first
///      intersection, back the last; candidates whose ray misses are dropped.
/// The silhouette test casts the same pixel-center ray that resolves the
/// object point, so mask membership and hit existence agree exactly.
ContactSet match_contacts(const PosedHand& hand, const HandModelDef& model,
                          const MeshSdf& object, const Pose6D& object_pose,
                          const CameraModel& camera, int frame = -1);

/// Convenience overload building the SDF (and its watertightness check).
ContactSet match_contacts(const PosedHand& hand, const HandModelDef& model,
                          const TriMesh& object, const Pose6D& object_pose,
                          const CameraModel& camera, int frame = -1);

void save_contacts_json(const std::vector<ContactSet>& contacts,
                        const std::filesystem::path& path);

}  // namespace hoifit
