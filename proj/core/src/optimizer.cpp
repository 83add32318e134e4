#include "hoifit/optimizer.hpp"

#include <cmath>
#include <fstream>

namespace hoifit {

namespace {

/// Plain Adam with bias correction; deterministic given the gradient stream.
class Adam {
 public:
  Adam(int dim, double lr) : lr_(lr), m_(VecX::Zero(dim)), v_(VecX::Zero(dim)) {}

  void step(VecX& x, const VecX& grad) {
    ++t_;
    m_ = beta1_ * m_ + (1.0 - beta1_) * grad;
    v_ = beta2_ * v_ + (1.0 - beta2_) * grad.cwiseProduct(grad);
    const double bc1 = 1.0 - std::pow(beta1_, t_);
    const double bc2 = 1.0 - std::pow(beta2_, t_);
    for (int i = 0; i < x.size(); ++i) {
      x[i] -= lr_ * (m_[i] / bc1) / (std::sqrt(v_[i] / bc2) + eps_);
    }
  }

 private:
  double lr_;
  double beta1_ = 0.9, beta2_ = 0.999, eps_ = 1e-8;
  int t_ = 0;
  VecX m_, v_;
};

StageResult run_descent(StageObjective& objective, VecX x, int steps, double lr,
                        int contact_refresh, GradientMode mode, bool with_contacts) {
  StageResult result;
  result.loss_trace.reserve(steps + 1);

  const VecX x_init = x;
  TermBreakdown terms;
  double loss = objective.evaluate(x, nullptr, &terms);
  result.initial_loss = loss;
  result.loss_trace.push_back(loss);
  result.terms.contact.push_back(terms.contact);
  result.terms.sdf.push_back(terms.sdf);
  result.terms.smooth.push_back(terms.smooth);
  result.terms.reg.push_back(terms.reg);

  VecX best_x = x;
  double best_loss = loss;

  Adam adam(static_cast<int>(x.size()), lr);
  VecX grad(x.size());
  for (int step = 0; step < steps; ++step) {
    if (with_contacts && contact_refresh > 0 && step > 0 && step % contact_refresh == 0) {
      objective.refresh_contacts(x);
    }
    if (mode == GradientMode::Analytic) {
      loss = objective.evaluate(x, &grad, &terms);
    } else {
      loss = objective.evaluate(x, nullptr, &terms);
      grad = objective.gradient(x, GradientMode::FiniteDifference);
    }
    if (!std::isfinite(loss)) {
      result.diverged = true;
      break;
    }
    if (loss < best_loss) {
      best_loss = loss;
      best_x = x;
    }
    adam.step(x, grad);
    result.loss_trace.push_back(loss);
    result.terms.contact.push_back(terms.contact);
    result.terms.sdf.push_back(terms.sdf);
    result.terms.smooth.push_back(terms.smooth);
    result.terms.reg.push_back(terms.reg);
    result.steps_run = step + 1;
  }

  // Evaluate the last iterate and keep the best parameters seen. If contact
  // refreshes changed the objective mid-run, fall back to the initial
  // parameters rather than report an increase.
  if (!result.diverged) {
    double last = objective.evaluate(x);
    if (std::isfinite(last) && last < best_loss) {
      best_loss = last;
      best_x = x;
    }
    double best_now = objective.evaluate(best_x);
    if (best_now > result.initial_loss) {
      double init_now = objective.evaluate(x_init);
      if (init_now < best_now) {
        best_x = x_init;
        best_now = init_now;
      }
    }
    result.final_loss = best_now;
  } else {
    result.final_loss = best_loss;
  }

  StageObjective::unpack(best_x, result.theta, result.tau);
  return result;
}

}  // namespace

StageResult optimize_interaction(const HandModelDef& model, const HandParams& init,
                                 const std::vector<VecX>& theta_ref,
                                 const MeshSdf& object,
                                 const std::vector<Pose6D>& object_poses,
                                 const std::vector<CameraModel>& cameras,
                                 const OptimConfig& config) {
  config.validate();
  init.validate();
  const int F = init.frame_count();
  if (static_cast<int>(object_poses.size()) != F ||
      static_cast<int>(cameras.size()) != F ||
      static_cast<int>(theta_ref.size()) != F) {
    throw std::invalid_argument("optimize_interaction: per-frame input sizes disagree");
  }

  StageObjective::Setup setup;
  setup.model = &model;
  setup.object = &object;
  setup.object_poses = object_poses;
  setup.cameras = cameras;
  setup.theta_ref = theta_ref;
  setup.beta = init.beta;
  setup.w_contact = config.lambda_contact;
  setup.w_sdf = config.lambda_sdf;
  setup.w_smooth = config.lambda_smooth;
  setup.w_reg = config.lambda_reg;
  setup.sdf_mode = config.sdf_mode;

  StageObjective objective(std::move(setup));
  VecX x = StageObjective::pack(init.theta, init.tau);
  if (config.lambda_contact > 0.0) objective.refresh_contacts(x);

  return run_descent(objective, std::move(x), config.interaction_steps,
                     config.interaction_lr, config.contact_refresh,
                     config.gradient_mode, config.lambda_contact > 0.0);
}

StageResult optimize_grasp(const HandModelDef& model, const HandParams& init,
                           const std::vector<VecX>& theta_ref,
                           const MeshSdf& object, const Pose6D& stationary,
                           const VecX& boundary_theta, const Vec3& boundary_tau,
                           const OptimConfig& config) {
  config.validate();
  init.validate();
  const int F = init.frame_count();
  if (static_cast<int>(theta_ref.size()) != F) {
    throw std::invalid_argument("optimize_grasp: theta_ref frame count mismatch");
  }

  StageObjective::Setup setup;
  setup.model = &model;
  setup.object = &object;
  setup.object_poses.assign(F, stationary);
  setup.theta_ref = theta_ref;
  setup.beta = init.beta;
  setup.w_contact = 0.0;
  setup.w_sdf = config.lambda_grasp_sdf;
  setup.w_smooth = config.lambda_grasp_smooth;
  setup.w_reg = config.lambda_grasp_reg;
  setup.sdf_mode = config.sdf_mode;
  setup.has_boundary = true;
  setup.boundary_theta = boundary_theta;
  setup.boundary_tau = boundary_tau;

  StageObjective objective(std::move(setup));
  VecX x = StageObjective::pack(init.theta, init.tau);
  return run_descent(objective, std::move(x), config.grasp_steps, config.grasp_lr,
                     0, config.gradient_mode, false);
}

std::vector<Vec3> reanchor_grasp_translations(const std::vector<Vec3>& tau,
                                              const Vec3& tau_interaction_start) {
  if (tau.empty()) return {};
  const Vec3 shift = tau_interaction_start - tau.back();
  std::vector<Vec3> out(tau.size());
  for (size_t i = 0; i < tau.size(); ++i) out[i] = tau[i] + shift;
  return out;
}

void save_loss_csv(const StageResult& result, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error(path.string() + ": cannot open for writing");
  out << "step,total,contact,sdf,smooth,reg\n";
  out.precision(17);
  for (size_t i = 0; i < result.loss_trace.size(); ++i) {
    out << i << "," << result.loss_trace[i] << "," << result.terms.contact[i] << ","
        << result.terms.sdf[i] << "," << result.terms.smooth[i] << ","
        << result.terms.reg[i] << "\n";
  }
}

}  // namespace hoifit
