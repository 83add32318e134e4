#pragma once

#include "hoifit/hand_model.hpp"
#include "hoifit/pose.hpp"

namespace hoifit {

struct CpfAlignResult {
  Pose6D pose;
  bool adjusted = false;   // true when the frame was rotated
  bool degenerate = false; // wrist-to-palm ray parallel to z; input returned
  double yaw_offset = 0.0; // signed rotation applied about world z, radians
};

/// Aligns a head-frame (CPF) pose with the grasping hand in a z-up,
/// object-centered world. The hand azimuth comes from the wrist-to-palm-
/// center ray projected onto the xy-plane, the frame azimuth from the CPF
/// local z axis projection. When the signed azimuth difference exceeds
/// max_offset (default pi/6) in magnitude, the CPF is rotated about the
/// world z-axis, centered at the object, by the difference clamped to
/// +-max_offset. Smaller differences leave the pose unchanged.
CpfAlignResult cpf_yaw_align(const Pose6D& cpf, const Vec3& wrist,
                             const Vec3& palm_center, const Vec3& object_center,
                             double max_offset = kPi / 6.0);

/// Convenience overload taking the anchors from a posed hand: wrist is
/// joint 0, palm center the mean of the model's palm_joints.
CpfAlignResult cpf_yaw_align(const Pose6D& cpf, const HandModelDef& model,
                             const PosedHand& hand, const Vec3& object_center,
                             double max_offset = kPi / 6.0);

}  // namespace hoifit
