#include "hoifit/hand_model.hpp"

#include <cmath>
#include <stdexcept>

#include "hoifit/pose.hpp"

namespace hoifit {

std::vector<Vec3> HandModelDef::rest_joints() const {
  std::vector<Vec3> joints(parents.size());
  for (size_t j = 0; j < parents.size(); ++j) {
    joints[j] = parents[j] < 0 ? joint_offsets[j] : joints[parents[j]] + joint_offsets[j];
  }
  return joints;
}

void HandModelDef::validate() const {
  const int J = joint_count();
  const int N = vertex_count();
  if (J < 1 || parents[0] != -1) {
    throw std::invalid_argument("hand model: joint 0 must be the wrist root");
  }
  for (int j = 1; j < J; ++j) {
    if (parents[j] < 0 || parents[j] >= j) {
      throw std::invalid_argument("hand model: parents must precede children");
    }
  }
  if (static_cast<int>(joint_offsets.size()) != J) {
    throw std::invalid_argument("hand model: joint_offsets size mismatch");
  }
  if (skin_weights.size() != static_cast<size_t>(N) * J) {
    throw std::invalid_argument("hand model: skin_weights size mismatch");
  }
  for (int i = 0; i < N; ++i) {
    double row = 0.0;
    for (int j = 0; j < J; ++j) {
      double w = weight(i, j);
      if (w < 0.0) throw std::invalid_argument("hand model: negative skinning weight");
      row += w;
    }
    if (std::abs(row - 1.0) > 1e-9) {
      throw std::invalid_argument("hand model: skinning weight row does not sum to 1");
    }
  }
  for (const auto& basis : shape_basis) {
    if (static_cast<int>(basis.size()) != N) {
      throw std::invalid_argument("hand model: shape basis size mismatch");
    }
  }
  for (int idx : contact_candidates) {
    if (idx < 0 || idx >= N) {
      throw std::invalid_argument("hand model: contact candidate index out of range");
    }
  }
  for (int j : fingertip_joints) {
    if (j < 0 || j >= J) {
      throw std::invalid_argument("hand model: fingertip joint index out of range");
    }
  }
  TriMesh shell;
  shell.vertices = template_vertices;
  shell.faces = faces;
  validate_face_indices(shell);
}

void HandParams::validate() const {
  if (theta.empty() || theta.size() != tau.size()) {
    throw std::invalid_argument("hand params: theta/tau frame counts differ or empty");
  }
  if (beta.size() != kShapeDim) {
    throw std::invalid_argument("hand params: beta must have 10 entries");
  }
  for (const auto& th : theta) {
    if (th.size() != kThetaDim) {
      throw std::invalid_argument("hand params: theta frames must have 48 entries");
    }
    if (!th.allFinite()) throw std::invalid_argument("hand params: non-finite theta");
  }
  for (const auto& t : tau) {
    if (!t.allFinite()) throw std::invalid_argument("hand params: non-finite tau");
  }
}

PosedHand forward_hand(const HandModelDef& model, const VecX& theta, const VecX& beta,
                       const Vec3& tau, FkState* state) {
  const int J = model.joint_count();
  const int N = model.vertex_count();
  if (theta.size() != kThetaDim) {
    throw std::invalid_argument("forward_hand: theta must have 48 entries");
  }
  if (beta.size() != static_cast<int>(model.shape_basis.size())) {
    throw std::invalid_argument("forward_hand: beta size does not match shape basis");
  }
  if (J != kHandJoints) {
    // The 48-dim theta layout fixes the skeleton at wrist + 15 joints.
    throw std::invalid_argument("forward_hand: model must have 16 joints for 48-dim theta");
  }

  FkState local_state;
  FkState& s = state ? *state : local_state;
  s.tau = tau;

  // Shape blend on the template.
  s.shaped = model.template_vertices;
  for (size_t k = 0; k < model.shape_basis.size(); ++k) {
    if (beta[k] == 0.0) continue;
    const auto& basis = model.shape_basis[k];
    for (int i = 0; i < N; ++i) s.shaped[i] += beta[k] * basis[i];
  }

  s.rest_joints = model.rest_joints();
  s.local_rot.resize(J);
  s.joint_rot.resize(J);
  s.joint_pos.resize(J);
  for (int j = 0; j < J; ++j) {
    const Vec3 w = theta.segment<3>(3 * j);
    s.local_rot[j] = rotation_matrix(w);
    if (model.parents[j] < 0) {
      // Global orientation rotates about the rest wrist position.
      s.joint_rot[j] = s.local_rot[j];
      s.joint_pos[j] = s.rest_joints[j];
    } else {
      const int p = model.parents[j];
      s.joint_rot[j] = s.joint_rot[p] * s.local_rot[j];
      s.joint_pos[j] = s.joint_pos[p] + s.joint_rot[p] * model.joint_offsets[j];
    }
  }

  PosedHand hand;
  hand.joints.resize(J);
  for (int j = 0; j < J; ++j) hand.joints[j] = s.joint_pos[j] + tau;

  hand.vertices.resize(N);
  for (int i = 0; i < N; ++i) {
    Vec3 acc = Vec3::Zero();
    const Vec3& v = s.shaped[i];
    for (int j = 0; j < J; ++j) {
      double w = model.weight(i, j);
      if (w == 0.0) continue;
      // Skinning transform M_j = G_j * Ghat_j^{-1}: rotate about the posed
      // joint what was rigid about the rest joint.
      acc += w * (s.joint_rot[j] * (v - s.rest_joints[j]) + s.joint_pos[j]);
    }
    hand.vertices[i] = acc + tau;
  }

  VertexNormals vn = vertex_normals(hand.vertices, model.faces);
  hand.normals = std::move(vn.normals);
  hand.normals_valid = std::move(vn.valid);
  return hand;
}

HandGrad forward_hand_backward(const HandModelDef& model, const VecX& theta,
                               const FkState& state,
                               const std::vector<Vec3>& d_vertices,
                               const std::vector<Vec3>& d_joints) {
  const int J = model.joint_count();
  const int N = model.vertex_count();
  HandGrad grad;

  // tau shifts every vertex and joint identically.
  for (const auto& d : d_vertices) grad.d_tau += d;
  for (const auto& d : d_joints) grad.d_tau += d;

  // Accumulate per-joint vertex cotangents:
  //   A_j = sum_i w_ij dL/dv_i
  //   B_j = sum_i w_ij dL/dv_i (shaped_i - rest_j)^T
  // so that dL/dtheta = sum_j <dR_j, B_j> + <dt_j, A_j> for the skinning
  // transform derivatives (dR_j, dt_j).
  std::vector<Vec3> A(J, Vec3::Zero());
  std::vector<Mat3> B(J, Mat3::Zero());
  bool any_vertex = false;
  for (int i = 0; i < N; ++i) {
    if (i >= static_cast<int>(d_vertices.size())) break;
    const Vec3& d = d_vertices[i];
    if (d.isZero(0.0)) continue;
    any_vertex = true;
    for (int j = 0; j < J; ++j) {
      double w = model.weight(i, j);
      if (w == 0.0) continue;
      A[j] += w * d;
      B[j] += (w * d) * (state.shaped[i] - state.rest_joints[j]).transpose();
    }
  }

  const bool any_joint = !d_joints.empty();
  if (!any_vertex && !any_joint && grad.d_tau.isZero(0.0)) return grad;

  // Chain-rule over each articulation component c of each joint a: the
  // derivative of a descendant transform G_k is
  //   P_a * dRot(theta_a)/dc * S_{a,k},   P_a = G_parent(a) Trans(offset_a),
  //   S_{a,k} = G_a^{-1} G_k.
  for (int a = 0; a < J; ++a) {
    const Vec3 w_a = theta.segment<3>(3 * a);
    const Mat3 parent_rot =
        model.parents[a] < 0 ? Mat3::Identity() : state.joint_rot[model.parents[a]];
    const Mat3 rot_a_t = state.joint_rot[a].transpose();

    for (int c = 0; c < 3; ++c) {
      const Mat3 dlocal = rotation_matrix_derivative(w_a, c);
      const Mat3 dfront = parent_rot * dlocal;  // rotation part of P_a * dRot
      double g = 0.0;

      for (int k = a; k < J; ++k) {
        // Skip joints outside a's subtree.
        bool descendant = (k == a);
        for (int q = k; q > a && !descendant;) {
          q = model.parents[q];
          descendant = (q == a);
        }
        if (!descendant) continue;

        const Mat3 S_rot = rot_a_t * state.joint_rot[k];
        const Vec3 S_t = rot_a_t * (state.joint_pos[k] - state.joint_pos[a]);
        const Mat3 dR_k = dfront * S_rot;
        const Vec3 dt_k = dfront * S_t;  // derivative of the posed joint position

        if (any_vertex) {
          // M_k translation = joint_pos_k - R_k * rest_k.
          g += dR_k.cwiseProduct(B[k]).sum();
          g += dt_k.dot(A[k]);
        }
        if (k < static_cast<int>(d_joints.size()) && !d_joints[k].isZero(0.0)) {
          g += dt_k.dot(d_joints[k]);
        }
      }
      grad.d_theta[3 * a + c] += g;
    }
  }
  return grad;
}

ContactCandidates contact_candidates(const HandModelDef& model, const PosedHand& hand) {
  ContactCandidates out;
  out.indices = model.contact_candidates;
  out.positions.reserve(out.indices.size());
  out.normals.reserve(out.indices.size());
  for (int idx : out.indices) {
    out.positions.push_back(hand.vertices[idx]);
    out.normals.push_back(hand.normals[idx]);
  }
  return out;
}

}  // namespace hoifit
