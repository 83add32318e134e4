#include "hoifit/optimizer.hpp"

#include <cmath>
#include <stdexcept>

namespace hoifit {

void OptimConfig::validate() const {
  const double weights[] = {lambda_contact, lambda_sdf,        lambda_smooth,
                            lambda_reg,     lambda_grasp_sdf,  lambda_grasp_smooth,
                            lambda_grasp_reg};
  for (double w : weights) {
    if (w < 0.0) throw std::invalid_argument("optim config: weights must be >= 0");
  }
  if (interaction_steps < 1 || grasp_steps < 1) {
    throw std::invalid_argument("optim config: step counts must be >= 1");
  }
  if (!(interaction_lr > 0.0) || !(grasp_lr > 0.0)) {
    throw std::invalid_argument("optim config: learning rates must be > 0");
  }
}

VecX finite_difference_gradient(const std::function<double(const VecX&)>& loss,
                                const VecX& x, double h) {
  VecX grad(x.size());
  VecX probe = x;
  for (int i = 0; i < x.size(); ++i) {
    const double saved = probe[i];
    probe[i] = saved + h;
    const double plus = loss(probe);
    probe[i] = saved - h;
    const double minus = loss(probe);
    probe[i] = saved;
    grad[i] = (plus - minus) / (2.0 * h);
  }
  return grad;
}

StageObjective::StageObjective(Setup setup) : setup_(std::move(setup)) {
  if (!setup_.model) throw std::invalid_argument("stage objective: model missing");
  const size_t F = setup_.object_poses.size();
  if (F == 0) throw std::invalid_argument("stage objective: empty frame range");
  if (setup_.theta_ref.size() != F) {
    throw std::invalid_argument("stage objective: theta_ref frame count mismatch");
  }
  if (setup_.w_contact > 0.0 && setup_.cameras.size() != F) {
    throw std::invalid_argument("stage objective: cameras required for the contact term");
  }
  if ((setup_.w_sdf > 0.0 || setup_.w_contact > 0.0) && !setup_.object) {
    throw std::invalid_argument("stage objective: object required");
  }
  contacts_.resize(F);
}

VecX StageObjective::pack(const std::vector<VecX>& theta, const std::vector<Vec3>& tau) {
  const int F = static_cast<int>(theta.size());
  VecX x(F * (kThetaDim + 3));
  for (int f = 0; f < F; ++f) {
    x.segment<kThetaDim>(f * (kThetaDim + 3)) = theta[f];
    x.segment<3>(f * (kThetaDim + 3) + kThetaDim) = tau[f];
  }
  return x;
}

void StageObjective::unpack(const VecX& x, std::vector<VecX>& theta, std::vector<Vec3>& tau) {
  const int stride = kThetaDim + 3;
  const int F = static_cast<int>(x.size()) / stride;
  theta.resize(F);
  tau.resize(F);
  for (int f = 0; f < F; ++f) {
    theta[f] = x.segment<kThetaDim>(f * stride);
    tau[f] = x.segment<3>(f * stride + kThetaDim);
  }
}

void StageObjective::refresh_contacts(const VecX& x) {
  std::vector<VecX> theta;
  std::vector<Vec3> tau;
  unpack(x, theta, tau);
  for (int f = 0; f < frame_count(); ++f) {
    PosedHand hand = forward_hand(*setup_.model, theta[f], setup_.beta, tau[f]);
    contacts_[f] = match_contacts(hand, *setup_.model, *setup_.object,
                                  setup_.object_poses[f], setup_.cameras[f], f);
  }
}

void StageObjective::set_contacts(std::vector<ContactSet> contacts) {
  if (contacts.size() != static_cast<size_t>(frame_count())) {
    throw std::invalid_argument("stage objective: contact frame count mismatch");
  }
  contacts_ = std::move(contacts);
}

double StageObjective::evaluate(const VecX& x, VecX* gradient,
                                TermBreakdown* breakdown) const {
  const HandModelDef& model = *setup_.model;
  const int F = frame_count();
  const int stride = kThetaDim + 3;
  const int N = model.vertex_count();
  const auto& tips = model.fingertip_joints;

  std::vector<VecX> theta;
  std::vector<Vec3> tau;
  unpack(x, theta, tau);

  // Forward pass.
  std::vector<FkState> states(F);
  std::vector<PosedHand> hands(F);
  for (int f = 0; f < F; ++f) {
    hands[f] = forward_hand(model, theta[f], setup_.beta, tau[f], &states[f]);
  }

  const bool want_grad = gradient != nullptr;
  std::vector<std::vector<Vec3>> d_verts;
  std::vector<std::vector<Vec3>> d_joints;
  if (want_grad) {
    d_verts.assign(F, std::vector<Vec3>(N, Vec3::Zero()));
    d_joints.assign(F, std::vector<Vec3>(model.joint_count(), Vec3::Zero()));
  }
  std::vector<VecX> d_theta_direct;
  if (want_grad) d_theta_direct.assign(F, VecX::Zero(kThetaDim));

  TermBreakdown terms;

  // Contact: per-frame mean distances, averaged over frames with matches.
  if (setup_.w_contact > 0.0) {
    int active = 0;
    for (int f = 0; f < F; ++f) {
      if (!contacts_[f].empty()) ++active;
    }
    if (active > 0) {
      const double frame_scale = 1.0 / active;
      for (int f = 0; f < F; ++f) {
        if (contacts_[f].empty()) continue;
        std::vector<Vec3> d_frame;
        if (want_grad) d_frame.assign(N, Vec3::Zero());
        terms.contact += frame_scale *
                         contact_loss_frame(contacts_[f], hands[f].vertices,
                                            want_grad ? &d_frame : nullptr);
        if (want_grad) {
          const double s = setup_.w_contact * frame_scale;
          for (int i = 0; i < N; ++i) d_verts[f][i] += s * d_frame[i];
        }
      }
    }
  }

  // Penetration: per-frame vertex sum, averaged over the stage.
  if (setup_.w_sdf > 0.0) {
    const double frame_scale = 1.0 / F;
    for (int f = 0; f < F; ++f) {
      std::vector<Vec3> d_frame;
      if (want_grad) d_frame.assign(N, Vec3::Zero());
      terms.sdf += frame_scale *
                   sdf_loss_frame(hands[f].vertices, *setup_.object,
                                  setup_.object_poses[f], setup_.sdf_mode,
                                  want_grad ? &d_frame : nullptr);
      if (want_grad) {
        const double s = setup_.w_sdf * frame_scale;
        for (int i = 0; i < N; ++i) d_verts[f][i] += s * d_frame[i];
      }
    }
  }

  // Smoothness, optionally extended one frame past the stage to the fixed
  // boundary. Gradients into the boundary frame are discarded.
  if (setup_.w_smooth > 0.0) {
    const int FB = F + (setup_.has_boundary ? 1 : 0);
    std::vector<VecX> theta_ext(FB);
    std::vector<std::vector<Vec3>> tip_ext(FB, std::vector<Vec3>(tips.size()));
    for (int f = 0; f < F; ++f) {
      theta_ext[f] = theta[f];
      for (size_t j = 0; j < tips.size(); ++j) {
        tip_ext[f][j] = hands[f].joints[tips[j]];
      }
    }
    if (setup_.has_boundary) {
      theta_ext[F] = setup_.boundary_theta;
      PosedHand boundary =
          forward_hand(model, setup_.boundary_theta, setup_.beta, setup_.boundary_tau);
      for (size_t j = 0; j < tips.size(); ++j) {
        tip_ext[F][j] = boundary.joints[tips[j]];
      }
    }

    std::vector<VecX> d_theta_ext;
    std::vector<std::vector<Vec3>> d_tip_ext;
    if (want_grad) {
      d_theta_ext.assign(FB, VecX::Zero(kThetaDim));
      d_tip_ext.assign(FB, std::vector<Vec3>(tips.size(), Vec3::Zero()));
    }
    terms.smooth = smoothness_loss(theta_ext, tip_ext, want_grad ? &d_theta_ext : nullptr,
                                   want_grad ? &d_tip_ext : nullptr);
    if (want_grad) {
      for (int f = 0; f < F; ++f) {
        d_theta_direct[f] += setup_.w_smooth * d_theta_ext[f];
        for (size_t j = 0; j < tips.size(); ++j) {
          d_joints[f][tips[j]] += setup_.w_smooth * d_tip_ext[f][j];
        }
      }
    }
  }

  // Regularization toward the reference poses.
  if (setup_.w_reg > 0.0) {
    std::vector<VecX> d_reg;
    if (want_grad) d_reg.assign(F, VecX::Zero(kThetaDim));
    terms.reg = regularization_loss(theta, setup_.theta_ref, want_grad ? &d_reg : nullptr);
    if (want_grad) {
      for (int f = 0; f < F; ++f) d_theta_direct[f] += setup_.w_reg * d_reg[f];
    }
  }

  if (want_grad) {
    gradient->setZero(x.size());
    for (int f = 0; f < F; ++f) {
      HandGrad hg = forward_hand_backward(model, theta[f], states[f], d_verts[f], d_joints[f]);
      gradient->segment<kThetaDim>(f * stride) = hg.d_theta + d_theta_direct[f];
      gradient->segment<3>(f * stride + kThetaDim) = hg.d_tau;
    }
  }

  if (breakdown) *breakdown = terms;
  return setup_.w_contact * terms.contact + setup_.w_sdf * terms.sdf +
         setup_.w_smooth * terms.smooth + setup_.w_reg * terms.reg;
}

VecX StageObjective::gradient(const VecX& x, GradientMode mode, double fd_step) const {
  if (mode == GradientMode::Analytic) {
    VecX g;
    evaluate(x, &g);
    return g;
  }
  return finite_difference_gradient([this](const VecX& p) { return evaluate(p); }, x,
                                    fd_step);
}

}  // namespace hoifit
