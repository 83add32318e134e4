#include <benchmark/benchmark.h>

#include <random>

#include "hoifit/hand_synthetic.hpp"

using namespace hoifit;

namespace {

VecX random_theta(std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 0.3);
  VecX theta(kThetaDim);
  for (int k = 0; k < kThetaDim; ++k) theta[k] = gauss(rng);
  return theta;
}

void BM_ForwardHand(benchmark::State& state) {
  HandModelDef model = make_synthetic_hand();
  std::mt19937_64 rng(1);
  VecX theta = random_theta(rng);
  VecX beta = VecX::Zero(kShapeDim);
  for (auto _ : state) {
    benchmark::DoNotOptimize(forward_hand(model, theta, beta, Vec3(0, 0, 0.4)));
  }
  state.SetLabel(std::to_string(model.vertex_count()) + " verts");
}
BENCHMARK(BM_ForwardHand);

void BM_ForwardHandBackward(benchmark::State& state) {
  HandModelDef model = make_synthetic_hand();
  std::mt19937_64 rng(2);
  std::normal_distribution<double> gauss(0.0, 1.0);
  VecX theta = random_theta(rng);
  VecX beta = VecX::Zero(kShapeDim);
  FkState fk;
  forward_hand(model, theta, beta, Vec3::Zero(), &fk);
  std::vector<Vec3> d_verts(model.vertex_count());
  std::vector<Vec3> d_joints(model.joint_count());
  for (auto& d : d_verts) d = Vec3(gauss(rng), gauss(rng), gauss(rng));
  for (auto& d : d_joints) d = Vec3(gauss(rng), gauss(rng), gauss(rng));
  for (auto _ : state) {
    benchmark::DoNotOptimize(forward_hand_backward(model, theta, fk, d_verts, d_joints));
  }
}
BENCHMARK(BM_ForwardHandBackward);

}  // namespace

BENCHMARK_MAIN();
