#include <benchmark/benchmark.h>

#include "obsloc/evaluation.hpp"
#include "obsloc/features.hpp"
#include "obsloc/registration.hpp"
#include "obsloc/scenes.hpp"

using namespace obsloc;

namespace {

ExecMode mode_of(const benchmark::State& state) {
  return state.range(0) == 0 ? ExecMode::Serial : ExecMode::Parallel;
}

const char* mode_name(const benchmark::State& state) {
  return state.range(0) == 0 ? "serial" : "parallel";
}

struct Fixture {
  PointCloud map;
  PointCloud scan;
  KdTree tree;
  PoseSE3 pose;

  Fixture()
      : map([] {
          SceneSpec spec;
          spec.kind = SceneKind::Room;
          spec.length = 20.0;
          spec.width = 10.0;
          spec.height = 4.0;
          spec.density = 120.0;
          spec.noise_sigma = 0.01;
          return generate_map(spec, 7);
        }()),
        scan([this] {
          SensorModel sensor;
          sensor.max_range = 30.0;
          sensor.rays = 8000;
          sensor.range_noise_sigma = 0.01;
          return simulate_scan(map, PoseSE3(Eigen::Quaterniond::Identity(),
                                            Eigen::Vector3d(10, 0, 1.5)),
                               sensor, 11);
        }()),
        tree(map),
        pose(Eigen::Quaterniond::Identity(), Eigen::Vector3d(10, 0.05, 1.45)) {}
};

Fixture& fixture() {
  static Fixture f;
  return f;
}

void bm_find_correspondences(benchmark::State& state) {
  Fixture& f = fixture();
  for (auto _ : state) {
    auto corrs = find_correspondences(f.scan, f.map, f.tree, f.pose, 1.0, mode_of(state));
    benchmark::DoNotOptimize(corrs);
  }
  state.SetLabel(mode_name(state));
}

void bm_alignment_matrix(benchmark::State& state) {
  Fixture& f = fixture();
  const auto corrs = find_correspondences(f.scan, f.map, f.tree, f.pose, 1.0, ExecMode::Serial);
  for (auto _ : state) {
    auto c = alignment_matrix(corrs, f.pose, mode_of(state));
    benchmark::DoNotOptimize(c);
  }
  state.SetLabel(mode_name(state));
}

void bm_estimate_normals(benchmark::State& state) {
  Fixture& f = fixture();
  for (auto _ : state) {
    auto cloud = estimate_normals(f.scan, 10, Eigen::Vector3d::Zero(), mode_of(state));
    benchmark::DoNotOptimize(cloud);
  }
  state.SetLabel(mode_name(state));
}

void bm_map_outlier_rate(benchmark::State& state) {
  Fixture& f = fixture();
  const PointCloud placed = transform_cloud(f.scan, f.pose);
  for (auto _ : state) {
    auto quality = map_outlier_rate(placed, f.tree, 0.10, mode_of(state));
    benchmark::DoNotOptimize(quality);
  }
  state.SetLabel(mode_name(state));
}

void bm_solve_registration(benchmark::State& state) {
  Fixture& f = fixture();
  RegistrationConfig cfg;
  cfg.exec = mode_of(state);
  for (auto _ : state) {
    auto result = solve_registration(f.scan, f.map, f.tree, f.pose, cfg);
    benchmark::DoNotOptimize(result);
  }
  state.SetLabel(mode_name(state));
}

}  // namespace

BENCHMARK(bm_find_correspondences)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(bm_alignment_matrix)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(bm_estimate_normals)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(bm_map_outlier_rate)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(bm_solve_registration)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
