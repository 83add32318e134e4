#pragma once

#include <filesystem>
#include <functional>
#include <memory>

#include "hoifit/losses.hpp"
#include "hoifit/one_euro.hpp"

namespace hoifit {

enum class GradientMode { Analytic, FiniteDifference };

/// Stage weights, step counts, and rates. Defaults are the working
/// configuration: interaction (2, 5, 1, 5) for 8000 steps at 5e-3, grasp
/// (2, 1, 5) for 2000 steps at 1e-2.
struct OptimConfig {
  double lambda_contact = 2.0;
  double lambda_sdf = 5.0;
  double lambda_smooth = 1.0;
  double lambda_reg = 5.0;

  double lambda_grasp_sdf = 2.0;
  double lambda_grasp_smooth = 1.0;
  double lambda_grasp_reg = 5.0;

  int interaction_steps = 8000;
  double interaction_lr = 5e-3;
  int grasp_steps = 2000;
  double grasp_lr = 1e-2;

  int contact_refresh = 2000;  // optimizer steps between re-matching; <= 0 keeps
                               // the initial correspondences for the whole stage
  GradientMode gradient_mode = GradientMode::Analytic;
  SdfLossMode sdf_mode = SdfLossMode::Hinge;

  void validate() const;
};

/// Optimized stage parameters plus the per-step loss record.
struct StageResult {
  std::vector<VecX> theta;
  std::vector<Vec3> tau;

  std::vector<double> loss_trace;  // entry 0 is the initial loss
  struct Terms {
    std::vector<double> contact, sdf, smooth, reg;  // unweighted, per step
  } terms;
  double initial_loss = 0.0;
  double final_loss = 0.0;
  bool diverged = false;
  int steps_run = 0;
};

/// Central-difference gradient with per-coordinate step h.
VecX finite_difference_gradient(const std::function<double(const VecX&)>& loss,
                                const VecX& x, double h = 1e-5);

struct TermBreakdown {
  double contact = 0.0, sdf = 0.0, smooth = 0.0, reg = 0.0;  // unweighted
};

/// Weighted multi-frame objective over one stage's (theta, tau) block.
/// Parameters pack as [theta_f(48), tau_f(3)] per frame. Contact
/// correspondences and SDF signs are held fixed within one evaluation, so
/// the objective is piecewise smooth. Geometry inputs are immutable during
/// a stage; evaluation is safe to run concurrently on distinct instances.
class StageObjective {
 public:
  struct Setup {
    const HandModelDef* model = nullptr;
    const MeshSdf* object = nullptr;
    std::vector<Pose6D> object_poses;       // per stage frame
    std::vector<CameraModel> cameras;       // per stage frame (contact stage only)
    std::vector<VecX> theta_ref;            // regularization target
    VecX beta = VecX::Zero(kShapeDim);

    double w_contact = 0.0, w_sdf = 0.0, w_smooth = 0.0, w_reg = 0.0;
    SdfLossMode sdf_mode = SdfLossMode::Hinge;

    // Optional fixed frame one past the stage end; the smoothness window is
    // extended to it so the stage boundary stays continuous.
    bool has_boundary = false;
    VecX boundary_theta;
    Vec3 boundary_tau = Vec3::Zero();
  };

  explicit StageObjective(Setup setup);

  int frame_count() const { return static_cast<int>(setup_.object_poses.size()); }
  int dimension() const { return frame_count() * (kThetaDim + 3); }

  static VecX pack(const std::vector<VecX>& theta, const std::vector<Vec3>& tau);
  static void unpack(const VecX& x, std::vector<VecX>& theta, std::vector<Vec3>& tau);

  /// Re-match contact correspondences from the given parameters.
  void refresh_contacts(const VecX& x);
  void set_contacts(std::vector<ContactSet> contacts);
  const std::vector<ContactSet>& contacts() const { return contacts_; }

  /// Weighted total; optionally the gradient and the unweighted per-term
  /// breakdown.
  double evaluate(const VecX& x, VecX* gradient = nullptr,
                  TermBreakdown* breakdown = nullptr) const;

  VecX gradient(const VecX& x, GradientMode mode, double fd_step = 1e-5) const;

 private:
  Setup setup_;
  std::vector<ContactSet> contacts_;
};

/// First-order descent on the interaction-stage objective
/// w1*contact + w2*sdf + w3*smooth + w4*reg over the stage's (theta, tau).
/// Correspondences are refreshed every config.contact_refresh steps.
/// Divergence (non-finite loss) stops the loop and flags the result, keeping
/// the trace. The returned parameters never score worse than the initial
/// ones under the final correspondences.
StageResult optimize_interaction(const HandModelDef& model, const HandParams& init,
                                 const std::vector<VecX>& theta_ref,
                                 const MeshSdf& object,
                                 const std::vector<Pose6D>& object_poses,
                                 const std::vector<CameraModel>& cameras,
                                 const OptimConfig& config);

/// Grasp-stage descent: w5*sdf + w6*smooth + w7*reg against the stationary
/// object, with the smoothness window extended one frame past the stage end
/// to the fixed first interaction frame.
StageResult optimize_grasp(const HandModelDef& model, const HandParams& init,
                           const std::vector<VecX>& theta_ref,
                           const MeshSdf& object, const Pose6D& stationary,
                           const VecX& boundary_theta, const Vec3& boundary_tau,
                           const OptimConfig& config);

/// Rigid shift of the grasp-stage translation targets so the stage endpoint
/// meets the optimized interaction start:
///   tau[i] <- tau[i] - tau.back() + tau_interaction_start.
std::vector<Vec3> reanchor_grasp_translations(const std::vector<Vec3>& tau,
                                              const Vec3& tau_interaction_start);

void save_loss_csv(const StageResult& result, const std::filesystem::path& path);

}  // namespace hoifit
