#include "hoifit/losses.hpp"

#include <cmath>
#include <stdexcept>

namespace hoifit {

namespace {

constexpr double kNormGuard = 1e-12;  // gradient of |x| at 0 taken as 0

}  // namespace

double contact_loss_frame(const ContactSet& contacts, const std::vector<Vec3>& vertices,
                          std::vector<Vec3>* d_vertices) {
  double front_sum = 0.0, back_sum = 0.0;
  size_t front_n = 0, back_n = 0;
  for (const auto& p : contacts.pairs) {
    if (p.label == ContactLabel::Front) ++front_n;
    else ++back_n;
  }
  for (const auto& p : contacts.pairs) {
    const Vec3 v = vertices[p.hand_vertex];
    const Vec3 delta = v - p.object_point;
    const double dist = delta.norm();
    const size_t n = p.label == ContactLabel::Front ? front_n : back_n;
    (p.label == ContactLabel::Front ? front_sum : back_sum) += dist;
    if (d_vertices && dist > kNormGuard) {
      (*d_vertices)[p.hand_vertex] += delta / (dist * static_cast<double>(n));
    }
  }
  double loss = 0.0;
  if (back_n > 0) loss += back_sum / static_cast<double>(back_n);
  if (front_n > 0) loss += front_sum / static_cast<double>(front_n);
  return loss;
}

double contact_loss(const std::vector<ContactSet>& contacts_per_frame,
                    const std::vector<std::vector<Vec3>>& vertices_per_frame) {
  if (contacts_per_frame.size() != vertices_per_frame.size()) {
    throw std::invalid_argument("contact_loss: frame count mismatch");
  }
  double total = 0.0;
  int active = 0;
  for (size_t f = 0; f < contacts_per_frame.size(); ++f) {
    if (contacts_per_frame[f].empty()) continue;
    total += contact_loss_frame(contacts_per_frame[f], vertices_per_frame[f]);
    ++active;
  }
  return active > 0 ? total / active : 0.0;
}

double sdf_loss_frame(const std::vector<Vec3>& vertices, const MeshSdf& object,
                      const Pose6D& object_pose, SdfLossMode mode,
                      std::vector<Vec3>* d_vertices) {
  const Rigid world_from_mesh = object_pose.to_rigid();
  const Rigid mesh_from_world = world_from_mesh.inverse();
  double loss = 0.0;
  for (size_t i = 0; i < vertices.size(); ++i) {
    const Vec3 local = mesh_from_world * vertices[i];
    if (mode == SdfLossMode::Hinge && object.certainly_outside(local)) {
      continue;  // cannot penetrate; contributes neither loss nor gradient
    }
    MeshSdf::Query q = object.query(local);
    if (mode == SdfLossMode::Hinge) {
      if (q.signed_distance < 0.0) {
        loss += -q.signed_distance;
        if (d_vertices) (*d_vertices)[i] += world_from_mesh.R * (-q.gradient);
      }
    } else {
      loss += q.signed_distance;
      if (d_vertices) (*d_vertices)[i] += world_from_mesh.R * q.gradient;
    }
  }
  return loss;
}

double sdf_loss(const std::vector<Vec3>& vertices, const TriMesh& object,
                const Pose6D& object_pose, SdfLossMode mode) {
  MeshSdf sdf(object);
  return sdf_loss_frame(vertices, sdf, object_pose, mode);
}

double smoothness_loss(const std::vector<VecX>& theta,
                       const std::vector<std::vector<Vec3>>& tip_positions,
                       std::vector<VecX>* d_theta,
                       std::vector<std::vector<Vec3>>* d_tips) {
  const int F = static_cast<int>(theta.size());
  if (static_cast<int>(tip_positions.size()) != F) {
    throw std::invalid_argument("smoothness_loss: theta/tip frame count mismatch");
  }
  if (F < 2) return 0.0;

  const int n_terms = F - 1;
  const double scale = 1.0 / std::max(1, n_terms - 1);
  const size_t n_tips = tip_positions.front().size();

  double loss = 0.0;
  for (int t = 0; t + 1 < F; ++t) {
    VecX dth = theta[t + 1] - theta[t];
    double dth_norm = dth.norm();
    loss += dth_norm;
    if (d_theta && dth_norm > kNormGuard) {
      VecX g = (scale / dth_norm) * dth;
      (*d_theta)[t + 1] += g;
      (*d_theta)[t] -= g;
    }
    for (size_t j = 0; j < n_tips; ++j) {
      Vec3 dj = tip_positions[t + 1][j] - tip_positions[t][j];
      double dj_norm = dj.norm();
      loss += dj_norm / static_cast<double>(n_tips);
      if (d_tips && dj_norm > kNormGuard) {
        Vec3 g = (scale / (dj_norm * static_cast<double>(n_tips))) * dj;
        (*d_tips)[t + 1][j] += g;
        (*d_tips)[t][j] -= g;
      }
    }
  }
  return loss * scale;
}

double regularization_loss(const std::vector<VecX>& theta,
                           const std::vector<VecX>& theta_ref,
                           std::vector<VecX>* d_theta) {
  const int F = static_cast<int>(theta.size());
  if (static_cast<int>(theta_ref.size()) != F) {
    throw std::invalid_argument("regularization_loss: frame count mismatch");
  }
  double sq = 0.0;
  for (int t = 0; t < F; ++t) {
    if (theta[t].size() != theta_ref[t].size()) {
      throw std::invalid_argument("regularization_loss: theta shape mismatch");
    }
    sq += (theta_ref[t] - theta[t]).squaredNorm();
  }
  const double scale = 1.0 / std::max(1, F - 1);
  const double norm = std::sqrt(sq);
  if (d_theta && norm > kNormGuard) {
    for (int t = 0; t < F; ++t) {
      (*d_theta)[t] += (scale / norm) * (theta[t] - theta_ref[t]);
    }
  }
  return norm * scale;
}

}  // namespace hoifit
