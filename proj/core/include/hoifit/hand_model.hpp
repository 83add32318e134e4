#pragma once

#include <vector>

#include "hoifit/mesh.hpp"
#include "hoifit/types.hpp"

namespace hoifit {

constexpr int kHandJoints = 16;       // wrist + 15 articulated
constexpr int kThetaDim = 48;         // [global(3), 15 joints x 3], depth-first order
constexpr int kShapeDim = 10;

/// Parametric skinned hand: rest-pose template, kinematic tree, linear blend
/// skinning weights, a linear shape basis, and the designated fingertip
/// contact-candidate vertices. Immutable after load; forward kinematics is a
/// pure function of (theta, beta, tau).
struct HandModelDef {
  std::vector<Vec3> template_vertices;       // rest pose, meters
  std::vector<FaceIndices> faces;

  std::vector<int> parents;                  // size J, parents[0] = -1 (wrist root)
  std::vector<Vec3> joint_offsets;           // rest offset from parent; absolute for root

  // Row-major [vertex][joint], rows sum to 1.
  std::vector<double> skin_weights;

  // kShapeDim per-vertex displacement directions, each template-sized.
  std::vector<std::vector<Vec3>> shape_basis;

  std::vector<int> contact_candidates;       // fingertip vertex indices
  std::vector<int> fingertip_joints;         // joint indices of the five tips
  std::vector<int> palm_joints;              // joints averaged for the palm center

  int joint_count() const { return static_cast<int>(parents.size()); }
  int vertex_count() const { return static_cast<int>(template_vertices.size()); }
  double weight(int vertex, int joint) const {
    return skin_weights[static_cast<size_t>(vertex) * parents.size() + joint];
  }

  /// Rest-pose joint positions accumulated down the tree.
  std::vector<Vec3> rest_joints() const;

  /// Throws std::invalid_argument on structural violations (weight rows not
  /// summing to 1, bad parent order, out-of-range candidate indices, ...).
  void validate() const;
};

/// Per-sequence hand parameters: theta is T x 48 axis-angle radians, beta 10
/// shape coefficients, tau T x 3 global translation in meters.
struct HandParams {
  std::vector<VecX> theta;  // each of size kThetaDim
  VecX beta = VecX::Zero(kShapeDim);
  std::vector<Vec3> tau;

  int frame_count() const { return static_cast<int>(theta.size()); }
  void validate() const;
};

struct PosedHand {
  std::vector<Vec3> vertices;   // world frame, meters
  std::vector<Vec3> joints;
  std::vector<Vec3> normals;    // unit where valid
  std::vector<uint8_t> normals_valid;
};

/// Cached per-frame kinematics used by the analytic backward pass.
struct FkState {
  std::vector<Mat3> joint_rot;      // world rotation of each joint frame
  std::vector<Vec3> joint_pos;      // posed joint positions before tau
  std::vector<Mat3> local_rot;      // Rot(theta_j)
  std::vector<Vec3> shaped;         // template + shape displacement
  std::vector<Vec3> rest_joints;
  Vec3 tau = Vec3::Zero();
};

/// Shape blend, linear blend skinning along the tree, then the global
/// wrist rotation theta[0:3] (about the rest wrist) and translation tau.
PosedHand forward_hand(const HandModelDef& model, const VecX& theta, const VecX& beta,
                       const Vec3& tau, FkState* state = nullptr);

struct HandGrad {
  VecX d_theta = VecX::Zero(kThetaDim);
  Vec3 d_tau = Vec3::Zero();
};

/// Reverse-mode pass through skinning and the kinematic chain: given
/// cotangents on posed vertices and joints, accumulates gradients on
/// (theta, tau). Entries of d_vertices/d_joints may be empty (zero).
HandGrad forward_hand_backward(const HandModelDef& model, const VecX& theta,
                               const FkState& state,
                               const std::vector<Vec3>& d_vertices,
                               const std::vector<Vec3>& d_joints);

struct ContactCandidates {
  std::vector<int> indices;     // into the hand vertex array
  std::vector<Vec3> positions;  // posed, world frame
  std::vector<Vec3> normals;    // posed, unit
};

/// The model's designated fingertip candidates with posed positions and
/// normals, in model definition order.
ContactCandidates contact_candidates(const HandModelDef& model, const PosedHand& hand);

}  // namespace hoifit
