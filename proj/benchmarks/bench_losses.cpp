#include <benchmark/benchmark.h>

#include <random>

#include "hoifit/hand_synthetic.hpp"
#include "hoifit/one_euro.hpp"
#include "hoifit/optimizer.hpp"
#include "hoifit/shapes.hpp"

using namespace hoifit;

namespace {

struct Setup {
  HandModelDef model = make_synthetic_hand();
  MeshSdf sdf{make_icosphere(0.04, 2)};
  StageObjective objective;
  VecX x;

  Setup() : objective(make_objective()) {
    std::vector<VecX> theta(8, VecX::Zero(kThetaDim));
    std::vector<Vec3> tau(8, Vec3(0, -0.17, 0.42));
    x = StageObjective::pack(theta, tau);
    objective.refresh_contacts(x);
  }

  StageObjective make_objective() {
    StageObjective::Setup setup;
    setup.model = &model;
    setup.object = &sdf;
    CameraModel cam;
    cam.K << 300, 0, 64, 0, 300, 64, 0, 0, 1;
    cam.width = cam.height = 128;
    for (int f = 0; f < 8; ++f) {
      setup.object_poses.emplace_back(Quat::Identity(), Vec3(0, 0, 0.5));
      setup.cameras.push_back(cam);
      setup.theta_ref.push_back(VecX::Zero(kThetaDim));
    }
    setup.beta = VecX::Zero(kShapeDim);
    setup.w_contact = 2.0;
    setup.w_sdf = 5.0;
    setup.w_smooth = 1.0;
    setup.w_reg = 5.0;
    return StageObjective(std::move(setup));
  }
};

void BM_ObjectiveEvaluate(benchmark::State& state) {
  Setup s;
  for (auto _ : state) {
    benchmark::DoNotOptimize(s.objective.evaluate(s.x));
  }
  state.SetLabel("8 frames");
}
BENCHMARK(BM_ObjectiveEvaluate);

void BM_ObjectiveEvaluateWithGradient(benchmark::State& state) {
  Setup s;
  VecX grad(s.x.size());
  for (auto _ : state) {
    benchmark::DoNotOptimize(s.objective.evaluate(s.x, &grad));
  }
  state.SetLabel("8 frames, analytic");
}
BENCHMARK(BM_ObjectiveEvaluateWithGradient);

void BM_OneEuroFilterPoses(benchmark::State& state) {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<Pose6D> poses;
  for (int i = 0; i < 256; ++i) {
    poses.emplace_back(quat_exp(0.02 * Vec3(gauss(rng), gauss(rng), gauss(rng))),
                       Vec3(0, 0, 0.001 * i));
  }
  OneEuroParams params;
  for (auto _ : state) {
    benchmark::DoNotOptimize(one_euro_filter_poses(poses, params));
  }
  state.SetLabel("256 poses");
}
BENCHMARK(BM_OneEuroFilterPoses);

}  // namespace

BENCHMARK_MAIN();
