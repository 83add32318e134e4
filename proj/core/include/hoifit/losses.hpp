#pragma once

#include <vector>

#include "hoifit/contact.hpp"
#include "hoifit/hand_model.hpp"
#include "hoifit/sdf.hpp"

namespace hoifit {

/// The penetration term as printed sums signed distances over all vertices,
/// which rewards hiding the hand inside the object; the hinge form penalizes
/// penetrating vertices only and is the default.
enum class SdfLossMode { Hinge, Literal };

/// Contact distance for one frame: mean over back pairs of |v - o| plus mean
/// over front pairs, with the hand points v taken from the current vertex
/// positions (object points stay fixed). An empty partition contributes 0.
/// When d_vertices is non-null, d(loss)/d(vertex) is accumulated into it.
double contact_loss_frame(const ContactSet& contacts, const std::vector<Vec3>& vertices,
                          std::vector<Vec3>* d_vertices = nullptr);

/// Per-frame contact losses averaged over frames with nonempty sets.
double contact_loss(const std::vector<ContactSet>& contacts_per_frame,
                    const std::vector<std::vector<Vec3>>& vertices_per_frame);

/// Penetration term for one frame. Hinge: sum_v max(0, -d(v)); literal:
/// sum_v d(v). Gradients flow through the hand vertices only, using the
/// closest-point direction as the SDF spatial gradient.
double sdf_loss_frame(const std::vector<Vec3>& vertices, const MeshSdf& object,
                      const Pose6D& object_pose, SdfLossMode mode,
                      std::vector<Vec3>* d_vertices = nullptr);

double sdf_loss(const std::vector<Vec3>& vertices, const TriMesh& object,
                const Pose6D& object_pose, SdfLossMode mode = SdfLossMode::Hinge);

/// Temporal smoothness over a stage:
///   sum_t ( |theta_{t+1} - theta_t| + mean_tip |j_{t+1} - j_t| ) / max(1, n_terms - 1)
/// where n_terms is the number of frame-to-frame differences. The verbatim
/// normalizer is one less than the term count, guarded for short ranges.
/// tip_positions is [frame][tip]. Ranges under two frames score 0.
double smoothness_loss(const std::vector<VecX>& theta,
                       const std::vector<std::vector<Vec3>>& tip_positions,
                       std::vector<VecX>* d_theta = nullptr,
                       std::vector<std::vector<Vec3>>* d_tips = nullptr);

/// Pose-deviation term: Frobenius norm of (theta_ref - theta) over the
/// stacked range, divided by max(1, frames - 1).
double regularization_loss(const std::vector<VecX>& theta,
                           const std::vector<VecX>& theta_ref,
                           std::vector<VecX>* d_theta = nullptr);

}  // namespace hoifit
