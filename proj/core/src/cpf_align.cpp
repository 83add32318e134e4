#include "hoifit/cpf_align.hpp"

#include <cmath>

namespace hoifit {

CpfAlignResult cpf_yaw_align(const Pose6D& cpf, const Vec3& wrist,
                             const Vec3& palm_center, const Vec3& object_center,
                             double max_offset) {
  CpfAlignResult result;
  result.pose = cpf;

  const Vec3 hand_ray = palm_center - wrist;
  const Vec3 view = cpf.rotation * Vec3(0, 0, 1);  // CPF local z in world
  constexpr double kMinPlanar = 1e-9;
  if (hand_ray.head<2>().norm() < kMinPlanar || view.head<2>().norm() < kMinPlanar) {
    result.degenerate = true;  // projection onto the xy-plane is undefined
    return result;
  }

  const double r_hand = std::atan2(hand_ray.y(), hand_ray.x());
  const double r_cpf = std::atan2(view.y(), view.x());
  const double diff = wrap_angle(r_hand - r_cpf);
  if (std::abs(diff) <= max_offset) return result;

  // Clamp the signed difference symmetrically and rotate about world z,
  // centered at the object.
  const double delta = std::clamp(diff, -max_offset, max_offset);
  const Quat rz = quat_exp(Vec3(0, 0, delta));
  result.pose.rotation = (rz * cpf.rotation).normalized();
  result.pose.translation = rz * (cpf.translation - object_center) + object_center;
  result.pose.canonicalize();
  result.adjusted = true;
  result.yaw_offset = delta;
  return result;
}

CpfAlignResult cpf_yaw_align(const Pose6D& cpf, const HandModelDef& model,
                             const PosedHand& hand, const Vec3& object_center,
                             double max_offset) {
  Vec3 palm = Vec3::Zero();
  const auto& joints = model.palm_joints;
  if (joints.empty()) {
    CpfAlignResult degenerate;
    degenerate.pose = cpf;
    degenerate.degenerate = true;
    return degenerate;
  }
  for (int j : joints) palm += hand.joints[j];
  palm /= static_cast<double>(joints.size());
  return cpf_yaw_align(cpf, hand.joints[0], palm, object_center, max_offset);
}

}  // namespace hoifit
