#include <gtest/gtest.h>

#include <random>

#include "hoifit/cpf_align.hpp"
#include "hoifit/hand_synthetic.hpp"
#include "hoifit/motion_completion.hpp"
#include "hoifit/optimizer.hpp"
#include "hoifit/shapes.hpp"

using namespace hoifit;

namespace {

// A small two-frame interaction setup against a sphere, with candidates
// matched from a slightly separated hand so every loss term is active.
struct ObjectiveRig {
  HandModelDef model = make_synthetic_hand();
  TriMesh sphere = make_icosphere(0.05, 2);
  std::shared_ptr<MeshSdf> sdf = std::make_shared<MeshSdf>(make_icosphere(0.05, 2));
  std::vector<Pose6D> poses;
  std::vector<CameraModel> cameras;
  std::vector<VecX> theta_ref;
  std::vector<VecX> theta;
  std::vector<Vec3> tau;
  std::mt19937_64 rng{99};

  explicit ObjectiveRig(int frames = 2) {
    CameraModel cam;
    cam.K << 300, 0, 64, 0, 300, 64, 0, 0, 1;
    cam.width = cam.height = 128;
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (int f = 0; f < frames; ++f) {
      poses.emplace_back(Quat::Identity(), Vec3(0, 0, 0.5 + 0.002 * f));
      cameras.push_back(cam);
      VecX th = VecX::Zero(kThetaDim);
      for (int k = 0; k < kThetaDim; ++k) th[k] = 0.05 * gauss(rng);
      theta.push_back(th);
      theta_ref.push_back(th + VecX::Constant(kThetaDim, 0.01));
      tau.push_back(Vec3(0.001 * f, -0.17, 0.42 + 0.001 * f));
    }
  }

  StageObjective make(double wc, double ws, double wm, double wr,
                      bool boundary = false) const {
    StageObjective::Setup setup;
    setup.model = &model;
    setup.object = sdf.get();
    setup.object_poses = poses;
    setup.cameras = cameras;
    setup.theta_ref = theta_ref;
    setup.beta = VecX::Zero(kShapeDim);
    setup.w_contact = wc;
    setup.w_sdf = ws;
    setup.w_smooth = wm;
    setup.w_reg = wr;
    if (boundary) {
      setup.has_boundary = true;
      setup.boundary_theta = theta_ref.front();
      setup.boundary_tau = tau.front() + Vec3(0.002, 0, 0);
    }
    StageObjective obj(std::move(setup));
    return obj;
  }
};

double max_relative_error(const VecX& a, const VecX& b) {
  double worst = 0.0;
  double scale = std::max(1e-6, std::max(a.cwiseAbs().maxCoeff(), b.cwiseAbs().maxCoeff()));
  for (int i = 0; i < a.size(); ++i) {
    worst = std::max(worst, std::abs(a[i] - b[i]) / scale);
  }
  return worst;
}

}  // namespace

TEST(Gradient, QuadraticTestFunction) {
  VecX c = VecX::LinSpaced(5, -1.0, 1.0);
  auto loss = [&](const VecX& x) { return (x - c).squaredNorm(); };
  VecX x = VecX::Constant(5, 0.3);
  VecX grad = finite_difference_gradient(loss, x);
  VecX expected = 2.0 * (x - c);
  EXPECT_LT((grad - expected).cwiseAbs().maxCoeff(), 1e-8);
}

TEST(Gradient, StationaryAtMinimum) {
  VecX c = VecX::Constant(4, 0.25);
  auto loss = [&](const VecX& x) { return (x - c).squaredNorm(); };
  VecX grad = finite_difference_gradient(loss, c);
  EXPECT_LT(grad.norm(), 1e-6);
}

TEST(Gradient, AnalyticMatchesFiniteDifferencePerTerm) {
  ObjectiveRig rig;
  const double weights[4][4] = {
      {1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, 1}};
  const char* names[4] = {"contact", "sdf", "smooth", "reg"};
  for (int term = 0; term < 4; ++term) {
    StageObjective obj = rig.make(weights[term][0], weights[term][1], weights[term][2],
                                  weights[term][3]);
    VecX x = StageObjective::pack(rig.theta, rig.tau);
    if (term == 0) obj.refresh_contacts(x);
    VecX analytic = obj.gradient(x, GradientMode::Analytic);
    VecX fd = obj.gradient(x, GradientMode::FiniteDifference);
    EXPECT_LT(max_relative_error(analytic, fd), 1e-3) << names[term];
  }
}

TEST(Gradient, GraspObjectiveWithBoundary) {
  ObjectiveRig rig(3);
  StageObjective obj = rig.make(0.0, 2.0, 1.0, 5.0, true);
  VecX x = StageObjective::pack(rig.theta, rig.tau);
  VecX analytic = obj.gradient(x, GradientMode::Analytic);
  VecX fd = obj.gradient(x, GradientMode::FiniteDifference);
  EXPECT_LT(max_relative_error(analytic, fd), 1e-3);
}

TEST(Gradient, ZeroWeightRemovesTermExactly) {
  ObjectiveRig rig;
  VecX x = StageObjective::pack(rig.theta, rig.tau);
  // With only the contact weight zeroed, correspondences may exist but the
  // term must contribute nothing.
  StageObjective with = rig.make(1.0, 1.0, 1.0, 1.0);
  with.refresh_contacts(x);
  StageObjective without = rig.make(0.0, 1.0, 1.0, 1.0);
  without.set_contacts(with.contacts());

  TermBreakdown breakdown;
  VecX g_with(x.size()), g_without(x.size());
  with.evaluate(x, &g_with, &breakdown);
  ASSERT_GT(breakdown.contact, 0.0);
  without.evaluate(x, &g_without, &breakdown);

  // Removing the term shifts the gradient by exactly the term's own gradient.
  StageObjective only = rig.make(1.0, 0.0, 0.0, 0.0);
  only.set_contacts(with.contacts());
  VecX g_only(x.size());
  only.evaluate(x, &g_only);
  EXPECT_LT((g_with - (g_without + g_only)).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(Optimizer, AllZeroWeightsReturnParametersUnchanged) {
  ObjectiveRig rig;
  HandParams init;
  init.theta = rig.theta;
  init.tau = rig.tau;
  init.beta = VecX::Zero(kShapeDim);
  OptimConfig config;
  config.lambda_contact = config.lambda_sdf = config.lambda_smooth = config.lambda_reg = 0;
  config.interaction_steps = 50;
  StageResult result = optimize_interaction(rig.model, init, rig.theta_ref, *rig.sdf,
                                            rig.poses, rig.cameras, config);
  for (size_t f = 0; f < init.theta.size(); ++f) {
    EXPECT_EQ(result.theta[f], init.theta[f]);
    EXPECT_EQ(result.tau[f], init.tau[f]);
  }
  EXPECT_DOUBLE_EQ(result.final_loss, 0.0);
}

TEST(Optimizer, FinalLossNeverExceedsInitial) {
  ObjectiveRig rig(3);
  HandParams init;
  init.theta = rig.theta;
  init.tau = rig.tau;
  init.beta = VecX::Zero(kShapeDim);
  OptimConfig config;
  config.interaction_steps = 200;
  StageResult result = optimize_interaction(rig.model, init, rig.theta_ref, *rig.sdf,
                                            rig.poses, rig.cameras, config);
  EXPECT_LE(result.final_loss, result.initial_loss);
  // Best-so-far trace is non-increasing.
  double best = result.loss_trace.front();
  for (double v : result.loss_trace) {
    best = std::min(best, v);
    EXPECT_LE(best, result.loss_trace.front());
  }
  EXPECT_TRUE(std::isfinite(result.final_loss));
}

TEST(Reanchor, AlreadyAnchoredIsIdentity) {
  std::vector<Vec3> tau = {Vec3(0, 0, 1), Vec3(0, 0, 3)};
  auto out = reanchor_grasp_translations(tau, Vec3(0, 0, 3));
  EXPECT_EQ(out[0], tau[0]);
  EXPECT_EQ(out[1], tau[1]);
}

TEST(Reanchor, ShiftSubstitution) {
  std::vector<Vec3> tau = {Vec3(0, 0, 0), Vec3(0, 0, 1)};
  auto out = reanchor_grasp_translations(tau, Vec3(0, 0, 3));
  EXPECT_LT((out[0] - Vec3(0, 0, 2)).norm(), 1e-15);
  EXPECT_LT((out[1] - Vec3(0, 0, 3)).norm(), 1e-15);
}

TEST(Reanchor, EndpointExactAndDifferencesPreserved) {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<Vec3> tau(7);
    for (auto& t : tau) t = Vec3(gauss(rng), gauss(rng), gauss(rng));
    Vec3 target(gauss(rng), gauss(rng), gauss(rng));
    auto out = reanchor_grasp_translations(tau, target);
    EXPECT_LT((out.back() - target).norm(), 1e-15);
    for (size_t i = 1; i < tau.size(); ++i) {
      EXPECT_LT(((out[i] - out[i - 1]) - (tau[i] - tau[i - 1])).norm(), 1e-12);
    }
  }
}

TEST(CompleteMotion, AllFramesVisibleIsIdentity) {
  std::vector<int> visible = {0, 1, 2};
  std::vector<VecX> theta(3, VecX::Constant(kThetaDim, 0.3));
  theta[1][4] = -0.2;
  std::vector<Vec3> tau = {Vec3(0, 0, 0), Vec3(1, 0, 0), Vec3(2, 0, 0)};
  auto out = complete_motion_interpolate(visible, theta, tau, 3);
  for (int t = 0; t < 3; ++t) {
    EXPECT_EQ(out.theta[t], theta[t]);
    EXPECT_EQ(out.tau[t], tau[t]);
  }
}

TEST(CompleteMotion, LinearMidpoint) {
  std::vector<int> visible = {0, 2};
  std::vector<VecX> theta(2, VecX::Zero(kThetaDim));
  std::vector<Vec3> tau = {Vec3(0, 0, 0), Vec3(0, 0, 2)};
  auto out = complete_motion_interpolate(visible, theta, tau, 3);
  EXPECT_LT((out.tau[1] - Vec3(0, 0, 1)).norm(), 1e-15);
}

TEST(CompleteMotion, SphericalJointInterpolation) {
  // 90 degree single-joint rotation across a 3-frame gap: intermediate
  // angles must be 30 and 60 degrees.
  std::vector<int> visible = {0, 3};
  std::vector<VecX> theta(2, VecX::Zero(kThetaDim));
  theta[1].segment<3>(6) = Vec3(0, 0, kPi / 2);
  std::vector<Vec3> tau(2, Vec3::Zero());
  auto out = complete_motion_interpolate(visible, theta, tau, 4);
  EXPECT_NEAR(out.theta[1].segment<3>(6).norm(), kPi / 6, 1e-12);
  EXPECT_NEAR(out.theta[2].segment<3>(6).norm(), kPi / 3, 1e-12);
  // The axis is preserved.
  EXPECT_NEAR(out.theta[1][8] / out.theta[1].segment<3>(6).norm(), 1.0, 1e-12);
}

TEST(CompleteMotion, ConstantExtrapolationBeforeFirstVisible) {
  std::vector<int> visible = {2, 4};
  std::vector<VecX> theta(2, VecX::Constant(kThetaDim, 0.1));
  theta[1] = VecX::Constant(kThetaDim, 0.2);
  std::vector<Vec3> tau = {Vec3(1, 0, 0), Vec3(2, 0, 0)};
  auto out = complete_motion_interpolate(visible, theta, tau, 5);
  EXPECT_EQ(out.theta[0], theta[0]);
  EXPECT_EQ(out.theta[1], theta[0]);
  EXPECT_EQ(out.tau[0], tau[0]);
}

TEST(CompleteMotion, EmptyVisibleSetRejected) {
  EXPECT_THROW(complete_motion_interpolate({}, {}, {}, 5), std::invalid_argument);
}

TEST(CompleteMotion, ExternalValidationAcceptsAndRejects) {
  std::vector<int> visible = {0, 2};
  std::vector<VecX> theta(2, VecX::Zero(kThetaDim));
  std::vector<Vec3> tau = {Vec3(0, 0, 0), Vec3(0, 0, 2)};
  MotionCompletion external = complete_motion_interpolate(visible, theta, tau, 3);
  external.source = MotionCompletion::Source::External;
  EXPECT_NO_THROW(validate_external_completion(external, visible, theta, tau, 1e-6));

  external.tau[2] += Vec3(0.01, 0, 0);
  std::vector<CompletionMismatch> report;
  EXPECT_THROW(validate_external_completion(external, visible, theta, tau, 1e-6, &report),
               std::runtime_error);
  ASSERT_EQ(report.size(), 1u);
  EXPECT_EQ(report[0].frame, 2);
  EXPECT_NEAR(report[0].tau_deviation, 0.01, 1e-12);
}

TEST(CpfYawAlign, AlignedPoseUnchanged) {
  Pose6D cpf(quat_exp(Vec3(0, 0, 0.3)), Vec3(1, 0, 1));
  Vec3 view = cpf.rotation * Vec3(0, 0, 1);
  // Wrist-to-palm ray with the same azimuth as the CPF view direction.
  Vec3 wrist(0.5, 0.5, 0.2);
  Vec3 palm = wrist + Vec3(view.x(), view.y(), 0.1);
  auto result = cpf_yaw_align(cpf, wrist, palm, Vec3::Zero());
  EXPECT_FALSE(result.adjusted);
  EXPECT_EQ(result.pose.translation, cpf.translation);
}

TEST(CpfYawAlign, BelowThresholdUnchanged) {
  Pose6D cpf(Quat::Identity(), Vec3(0, -1, 0));  // local z = world z... use a view
  // Build a CPF whose view azimuth is 0 (along +x).
  Pose6D cpf_x(quat_exp(Vec3(0, kPi / 2, 0)), Vec3(-1, 0, 0));
  Vec3 wrist(0, 0, 0);
  Vec3 palm = Vec3(std::cos(deg_to_rad(20)), std::sin(deg_to_rad(20)), 0);
  auto result = cpf_yaw_align(cpf_x, wrist, palm, Vec3::Zero());
  EXPECT_FALSE(result.adjusted);
}

TEST(CpfYawAlign, LargeOffsetClampedToThirtyDegrees) {
  // CPF view along +x, hand azimuth 50 degrees: rotate by 30, leaving 20.
  Pose6D cpf(quat_exp(Vec3(0, kPi / 2, 0)), Vec3(-1, 0, 0));
  Vec3 wrist(0, 0, 0);
  Vec3 palm(std::cos(deg_to_rad(50)), std::sin(deg_to_rad(50)), 0);
  Vec3 object_center(0, 0, 0);
  auto result = cpf_yaw_align(cpf, wrist, palm, object_center);
  ASSERT_TRUE(result.adjusted);
  EXPECT_NEAR(result.yaw_offset, kPi / 6, 1e-12);

  Vec3 new_view = result.pose.rotation * Vec3(0, 0, 1);
  double r_cpf = std::atan2(new_view.y(), new_view.x());
  double r_hand = deg_to_rad(50);
  EXPECT_NEAR(rad_to_deg(wrap_angle(r_hand - r_cpf)), 20.0, 1e-9);
  // Translation rotated about the object center.
  EXPECT_NEAR(result.pose.translation.norm(), 1.0, 1e-12);
  EXPECT_NEAR(wrap_angle(std::atan2(result.pose.translation.y(),
                                    result.pose.translation.x()) -
                         (kPi + kPi / 6)),
              0.0, 1e-9);
}

TEST(CpfYawAlign, NegativeOffsetClampedSymmetrically) {
  Pose6D cpf(quat_exp(Vec3(0, kPi / 2, 0)), Vec3(-1, 0, 0));
  Vec3 wrist(0, 0, 0);
  Vec3 palm(std::cos(deg_to_rad(-50)), std::sin(deg_to_rad(-50)), 0);
  auto result = cpf_yaw_align(cpf, wrist, palm, Vec3::Zero());
  ASSERT_TRUE(result.adjusted);
  EXPECT_NEAR(result.yaw_offset, -kPi / 6, 1e-12);
}

TEST(CpfYawAlign, DegenerateProjectionReturnsInput) {
  Pose6D cpf(Quat::Identity(), Vec3(1, 2, 3));
  // Wrist-to-palm ray parallel to world z.
  auto result = cpf_yaw_align(cpf, Vec3(0, 0, 0), Vec3(0, 0, 0.2), Vec3::Zero());
  EXPECT_TRUE(result.degenerate);
  EXPECT_EQ(result.pose.translation, cpf.translation);
}
