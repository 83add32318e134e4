#include <benchmark/benchmark.h>

#include <random>

#include "hoifit/sdf.hpp"
#include "hoifit/raycast.hpp"
#include "hoifit/shapes.hpp"

using namespace hoifit;

namespace {

TriMesh bench_mesh(int subdivisions) { return make_icosphere(0.05, subdivisions); }

void BM_BvhBuild(benchmark::State& state) {
  TriMesh mesh = bench_mesh(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    TriangleBvh bvh(mesh);
    benchmark::DoNotOptimize(bvh);
  }
  state.SetLabel(std::to_string(mesh.faces.size()) + " tris");
}
BENCHMARK(BM_BvhBuild)->Arg(2)->Arg(3)->Arg(4);

void BM_RayAllHits(benchmark::State& state) {
  TriangleBvh bvh(bench_mesh(static_cast<int>(state.range(0))));
  std::mt19937_64 rng(1);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<std::pair<Vec3, Vec3>> rays(1024);
  for (auto& [org, dir] : rays) {
    org = 0.2 * Vec3(gauss(rng), gauss(rng), gauss(rng));
    dir = Vec3(gauss(rng), gauss(rng), gauss(rng)).normalized();
  }
  size_t i = 0;
  for (auto _ : state) {
    const auto& [org, dir] = rays[i++ & 1023];
    benchmark::DoNotOptimize(bvh.all_hits(org, dir));
  }
}
BENCHMARK(BM_RayAllHits)->Arg(2)->Arg(4);

void BM_SignedDistance(benchmark::State& state) {
  MeshSdf sdf(bench_mesh(static_cast<int>(state.range(0))));
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(-0.08, 0.08);
  std::vector<Vec3> points(1024);
  for (auto& p : points) p = Vec3(u(rng), u(rng), u(rng));
  size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(sdf.signed_distance(points[i++ & 1023]));
  }
}
BENCHMARK(BM_SignedDistance)->Arg(2)->Arg(4);

void BM_RenderMask(benchmark::State& state) {
  TriangleBvh bvh(bench_mesh(2));
  CameraModel cam;
  cam.K << 240, 0, 64, 0, 240, 64, 0, 0, 1;
  cam.width = cam.height = static_cast<int>(state.range(0));
  cam.K(0, 2) = cam.K(1, 2) = cam.width / 2.0;
  Pose6D pose(Quat::Identity(), Vec3(0, 0, 0.45));
  for (auto _ : state) {
    benchmark::DoNotOptimize(render_object_mask(bvh, pose, cam));
  }
}
BENCHMARK(BM_RenderMask)->Arg(64)->Arg(128);

}  // namespace

BENCHMARK_MAIN();
