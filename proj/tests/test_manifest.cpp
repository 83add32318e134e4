#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "hoifit/hand_io.hpp"
#include "hoifit/hand_synthetic.hpp"
#include "hoifit/manifest.hpp"
#include "hoifit/mesh_io.hpp"
#include "hoifit/shapes.hpp"

using namespace hoifit;

namespace {

class ManifestTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = std::filesystem::temp_directory_path() / "hoifit_manifest_test";
    std::filesystem::create_directories(dir_);
    save_obj(make_icosphere(0.05, 1), dir_ / "object.obj");
    save_hand_model(make_synthetic_hand(), dir_ / "hand.json");

    manifest_.fps = 30.0;
    manifest_.object_mesh_file = "object.obj";
    manifest_.hand_model_file = "hand.json";
    manifest_.base_dir = dir_;
    CameraModel cam;
    cam.K << 100, 0, 32, 0, 100, 32, 0, 0, 1;
    cam.width = cam.height = 64;
    for (int t = 0; t < 3; ++t) {
      FrameRecord rec;
      rec.camera = cam;
      rec.object_pose = Pose6D(Quat::Identity(), Vec3(0, 0, 0.4 + 0.01 * t));
      rec.hand_visible = t > 0;
      if (rec.hand_visible) {
        rec.hand_theta = VecX::Constant(kThetaDim, 0.01 * t);
        rec.hand_tau = Vec3(0.1 * t, 0, 0.3);
      }
      manifest_.frames.push_back(rec);
    }
  }

  void TearDown() override { std::filesystem::remove_all(dir_); }

  std::filesystem::path dir_;
  SequenceManifest manifest_;
};

}  // namespace

TEST_F(ManifestTest, SaveLoadRoundTrip) {
  manifest_.grasp_frame = 1;
  save_manifest(manifest_, dir_ / "manifest.json");
  SequenceManifest loaded = load_manifest(dir_ / "manifest.json");

  EXPECT_DOUBLE_EQ(loaded.fps, manifest_.fps);
  EXPECT_EQ(loaded.grasp_frame, manifest_.grasp_frame);
  ASSERT_EQ(loaded.frame_count(), manifest_.frame_count());
  for (int t = 0; t < 3; ++t) {
    const auto& a = loaded.frames[t];
    const auto& b = manifest_.frames[t];
    EXPECT_EQ(a.hand_visible, b.hand_visible);
    EXPECT_LT((a.camera.K - b.camera.K).norm(), 1e-15);
    EXPECT_LT((a.object_pose.translation - b.object_pose.translation).norm(), 1e-15);
    if (a.hand_visible) {
      EXPECT_LT((a.hand_theta - b.hand_theta).norm(), 1e-15);
      EXPECT_LT((a.hand_tau - b.hand_tau).norm(), 1e-15);
    }
  }
  // load(save(load(x))) == load(save(x)) up to file identity.
  save_manifest(loaded, dir_ / "manifest2.json");
  std::ifstream f1(dir_ / "manifest.json"), f2(dir_ / "manifest2.json");
  std::string s1((std::istreambuf_iterator<char>(f1)), std::istreambuf_iterator<char>());
  std::string s2((std::istreambuf_iterator<char>(f2)), std::istreambuf_iterator<char>());
  EXPECT_EQ(s1, s2);
}

TEST_F(ManifestTest, MissingObjectMeshNamesField) {
  manifest_.object_mesh_file = "does_not_exist.obj";
  save_manifest(manifest_, dir_ / "manifest.json");
  try {
    load_manifest(dir_ / "manifest.json");
    FAIL() << "expected ManifestError";
  } catch (const ManifestError& e) {
    EXPECT_NE(std::string(e.what()).find("object_mesh"), std::string::npos);
  }
}

TEST_F(ManifestTest, VisibleFrameWithoutThetaRejected) {
  save_manifest(manifest_, dir_ / "manifest.json");
  // Corrupt the JSON: drop hand_theta from a visible frame.
  std::ifstream in(dir_ / "manifest.json");
  nlohmann::json j = nlohmann::json::parse(in);
  in.close();
  j["frames"][1].erase("hand_theta");
  std::ofstream out(dir_ / "manifest.json");
  out << j.dump(2);
  out.close();
  try {
    load_manifest(dir_ / "manifest.json");
    FAIL() << "expected ManifestError";
  } catch (const ManifestError& e) {
    EXPECT_NE(std::string(e.what()).find("frames[1]"), std::string::npos);
  }
}

TEST_F(ManifestTest, WrongThetaLengthRejected) {
  manifest_.frames[1].hand_theta = VecX::Zero(12);
  EXPECT_THROW(save_manifest(manifest_, dir_ / "m.json"), ManifestError);
}

TEST_F(ManifestTest, BadRotationRejected) {
  manifest_.frames[0].camera.R(0, 0) = 2.0;
  EXPECT_THROW(manifest_.validate(false), ManifestError);
}

TEST_F(ManifestTest, UnsupportedSchemaVersionRejected) {
  save_manifest(manifest_, dir_ / "manifest.json");
  std::ifstream in(dir_ / "manifest.json");
  nlohmann::json j = nlohmann::json::parse(in);
  in.close();
  j["schema_version"] = 99;
  std::ofstream out(dir_ / "manifest.json");
  out << j.dump(2);
  out.close();
  EXPECT_THROW(load_manifest(dir_ / "manifest.json"), ManifestError);
}

TEST_F(ManifestTest, ConfigRoundTripsThroughJson) {
  PipelineConfig config;
  config.segmentation.eps_translation = 0.007;
  config.filter.speed_coeff = 0.05;
  config.optim.interaction_steps = 123;
  config.optim.gradient_mode = GradientMode::FiniteDifference;
  config.optim.sdf_mode = SdfLossMode::Literal;
  config.completion_file = "completion.json";
  PipelineConfig loaded = config_from_json(config_to_json(config));
  EXPECT_DOUBLE_EQ(loaded.segmentation.eps_translation, 0.007);
  EXPECT_DOUBLE_EQ(loaded.filter.speed_coeff, 0.05);
  EXPECT_EQ(loaded.optim.interaction_steps, 123);
  EXPECT_EQ(loaded.optim.gradient_mode, GradientMode::FiniteDifference);
  EXPECT_EQ(loaded.optim.sdf_mode, SdfLossMode::Literal);
  ASSERT_TRUE(loaded.completion_file.has_value());
  EXPECT_EQ(*loaded.completion_file, "completion.json");
}

TEST_F(ManifestTest, HandSequenceRoundTrip) {
  HandSequence seq;
  seq.beta = VecX::LinSpaced(kShapeDim, -1.0, 1.0);
  seq.visible = {true, false, true};
  seq.theta = {VecX::Constant(kThetaDim, 0.1), VecX(), VecX::Constant(kThetaDim, 0.3)};
  seq.tau = {Vec3(1, 2, 3), Vec3::Zero(), Vec3(4, 5, 6)};
  save_hand_sequence_json(seq, dir_ / "hand_seq.json");
  HandSequence loaded = load_hand_sequence_json(dir_ / "hand_seq.json");
  ASSERT_EQ(loaded.frame_count(), 3);
  EXPECT_FALSE(loaded.visible[1]);
  EXPECT_LT((loaded.theta[2] - seq.theta[2]).norm(), 1e-15);
  EXPECT_LT((loaded.tau[2] - seq.tau[2]).norm(), 1e-15);
  EXPECT_LT((loaded.beta - seq.beta).norm(), 1e-15);
}

TEST_F(ManifestTest, GroundTruthRoundTrip) {
  GroundTruth gt;
  gt.t_star = 4;
  gt.object.fps = 30.0;
  for (int t = 0; t < 3; ++t) {
    gt.object.poses.emplace_back(quat_exp(Vec3(0, 0, 0.1 * t)), Vec3(0, t * 0.01, 0));
    gt.hand.visible.push_back(true);
    gt.hand.theta.push_back(VecX::Constant(kThetaDim, 0.2 * t));
    gt.hand.tau.push_back(Vec3(t * 0.1, 0, 0));
  }
  save_ground_truth_json(gt, dir_ / "gt.json");
  GroundTruth loaded = load_ground_truth_json(dir_ / "gt.json");
  EXPECT_EQ(loaded.t_star, 4);
  ASSERT_EQ(loaded.object.frame_count(), 3);
  EXPECT_NEAR(rotation_delta(loaded.object.poses[2], gt.object.poses[2]), 0.0, 1e-12);
  EXPECT_LT((loaded.hand.theta[1] - gt.hand.theta[1]).norm(), 1e-15);
}
