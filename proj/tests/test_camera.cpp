#include <gtest/gtest.h>

#include <random>

#include "hoifit/camera.hpp"
#include "hoifit/raycast.hpp"
#include "hoifit/shapes.hpp"
#include "support/oracles.hpp"

using namespace hoifit;

namespace {

CameraModel unit_camera() {
  CameraModel cam;
  cam.K = Mat3::Identity();
  cam.width = cam.height = 2;
  return cam;
}

}  // namespace

TEST(ProjectPoints, OpticalAxis) {
  auto out = project_points(unit_camera(), {Vec3(0, 0, 1)});
  ASSERT_TRUE(out[0].valid);
  EXPECT_DOUBLE_EQ(out[0].pixel.x(), 0.0);
  EXPECT_DOUBLE_EQ(out[0].pixel.y(), 0.0);
}

TEST(ProjectPoints, PinholeFormula) {
  CameraModel cam;
  cam.K << 100, 0, 50, 0, 100, 50, 0, 0, 1;
  cam.width = cam.height = 100;
  auto out = project_points(cam, {Vec3(1.0, 0.5, 1.0)});
  ASSERT_TRUE(out[0].valid);
  EXPECT_DOUBLE_EQ(out[0].pixel.x(), 150.0);
  EXPECT_DOUBLE_EQ(out[0].pixel.y(), 100.0);
}

TEST(ProjectPoints, BehindCameraFlaggedInvalid) {
  auto out = project_points(unit_camera(), {Vec3(0, 0, -1), Vec3(1, 1, 0)});
  EXPECT_FALSE(out[0].valid);
  EXPECT_FALSE(out[1].valid);
}

TEST(ProjectPoints, RoundTripThroughBackprojection) {
  CameraModel cam = CameraModel::look_at(Vec3(0.2, -0.4, 0.3), Vec3(0, 0, 0), Vec3(0, 0, 1),
                                         240, 240, 64, 64, 128, 128);
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-0.2, 0.2);
  for (int i = 0; i < 200; ++i) {
    Vec3 p(u(rng), u(rng), u(rng));
    if (cam.to_camera(p).z() <= 0.0) continue;
    auto proj = project_points(cam, {p});
    ASSERT_TRUE(proj[0].valid);
    // Recover the world point from the pixel at the projected depth.
    double depth = cam.to_camera(p).z();
    Vec3 back = cam.R.transpose() *
                    (depth * (cam.K.inverse() * Vec3(proj[0].pixel.x(), proj[0].pixel.y(), 1.0)) -
                     cam.t);
    EXPECT_LT((back - p).norm(), 1e-9);
  }
}

TEST(BackprojectDepth, PrincipalPoint) {
  CameraModel cam;
  cam.K << 100, 0, 50, 0, 100, 50, 0, 0, 1;
  cam.width = cam.height = 100;
  DepthFrame depth = DepthFrame::zeros(100, 100);
  depth.at(50, 50) = 2.5f;
  auto cloud = backproject_depth(depth, cam);
  ASSERT_EQ(cloud.size(), 1u);
  EXPECT_LT((cloud[0] - Vec3(0, 0, 2.5)).norm(), 1e-7);
}

TEST(BackprojectDepth, TranslatedExtrinsics) {
  CameraModel cam;
  cam.K << 100, 0, 50, 0, 100, 50, 0, 0, 1;
  cam.t = Vec3(0, 0, 1);
  cam.width = cam.height = 100;
  DepthFrame depth = DepthFrame::zeros(100, 100);
  depth.at(50, 50) = 2.0f;
  auto cloud = backproject_depth(depth, cam);
  ASSERT_EQ(cloud.size(), 1u);
  EXPECT_LT((cloud[0] - Vec3(0, 0, 1.0)).norm(), 1e-7);
}

TEST(BackprojectDepth, EmptyValidSetGivesEmptyCloud) {
  DepthFrame depth = DepthFrame::zeros(8, 8);
  EXPECT_TRUE(backproject_depth(depth, unit_camera()).empty());
}

TEST(BackprojectDepth, RenderedDepthLandsOnMesh) {
  // Depth rendered from a known mesh must back-project onto its surface.
  TriMesh sphere = make_icosphere(0.15, 3, Vec3(0, 0, 0));
  CameraModel cam = CameraModel::look_at(Vec3(0, -0.6, 0.1), Vec3(0, 0, 0), Vec3(0, 0, 1),
                                         200, 200, 32, 32, 64, 64);
  TriangleBvh bvh(sphere);
  DepthFrame depth = render_depth(bvh, Pose6D::identity(), cam);
  ASSERT_GT(depth.valid_count(), 100u);
  auto cloud = backproject_depth(depth, cam);
  for (const auto& p : cloud) {
    EXPECT_LT(std::abs(oracles::analytic_sphere_sdf(p, Vec3(0, 0, 0), 0.15)), 2e-3);
    EXPECT_LT(oracles::brute_force_distance(sphere, p), 1e-6);
  }
}

TEST(CameraModel, LookAtIsValid) {
  CameraModel cam = CameraModel::look_at(Vec3(1, 2, 3), Vec3(0, 0, 0), Vec3(0, 0, 1),
                                         100, 100, 50, 50, 100, 100);
  EXPECT_TRUE(cam.is_valid());
  // The target projects to the principal point.
  auto out = project_points(cam, {Vec3(0, 0, 0)});
  ASSERT_TRUE(out[0].valid);
  EXPECT_NEAR(out[0].pixel.x(), 50.0, 1e-9);
  EXPECT_NEAR(out[0].pixel.y(), 50.0, 1e-9);
}
