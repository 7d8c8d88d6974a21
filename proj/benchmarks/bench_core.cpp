#include <benchmark/benchmark.h>

#include <vector>

#include "hppa/diagnostics.hpp"
#include "hppa/ppa.hpp"
#include "hppa/prox.hpp"
#include "hppa/rng.hpp"
#include "hppa/scenario.hpp"

namespace {

using namespace hppa;

std::vector<Point> sample(const Space& X, int count, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<Point> pts;
  for (int i = 0; i < count; ++i) {
    if (X.backend() == Backend::Euclidean) {
      Eigen::VectorXd v(X.dimension());
      for (int j = 0; j < X.dimension(); ++j) v(j) = rng.uniform(-3.0, 3.0);
      pts.push_back(euclidean_point(v));
    } else if (X.backend() == Backend::Hyperbolic) {
      Eigen::VectorXd u(X.dimension());
      for (int j = 0; j < X.dimension(); ++j) u(j) = rng.normal();
      pts.push_back(hyperbolic_polar(rng.uniform(0.0, 2.0), u.normalized()));
    } else {
      pts.push_back(tree_point(rng.uniform_int(X.dimension()), rng.uniform(0.0, 3.0)));
    }
  }
  return pts;
}

Space space_for(int which) {
  switch (which) {
    case 0: return Space::euclidean(3);
    case 1: return Space::hyperbolic(3);
    default: return Space::spider_tree(4);
  }
}

void BM_Distance(benchmark::State& state) {
  const Space X = space_for(static_cast<int>(state.range(0)));
  const auto pts = sample(X, 256, 1);
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(distance(X, pts[i % 256], pts[(i + 1) % 256]));
    ++i;
  }
  state.SetLabel(backend_name(X.backend()));
}
BENCHMARK(BM_Distance)->DenseRange(0, 2);

void BM_Combine(benchmark::State& state) {
  const Space X = space_for(static_cast<int>(state.range(0)));
  const auto pts = sample(X, 256, 2);
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(combine(X, pts[i % 256], pts[(i + 1) % 256], 0.3));
    ++i;
  }
  state.SetLabel(backend_name(X.backend()));
}
BENCHMARK(BM_Combine)->DenseRange(0, 2);

void BM_ResolventNumeric(benchmark::State& state) {
  const Space X = space_for(static_cast<int>(state.range(0)));
  const auto anchors = sample(X, 4, 3);
  const auto f = objectives::sum_of_distances(X, anchors, {1.0, 2.0, 1.0, 1.5});
  const auto starts = sample(X, 64, 4);
  ResolventConfig cfg;
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(resolvent(X, f, cfg, starts[i % 64]));
    ++i;
  }
  state.SetLabel(backend_name(X.backend()));
}
BENCHMARK(BM_ResolventNumeric)->DenseRange(0, 2);

void BM_ScenarioRun(benchmark::State& state) {
  const auto names = scenario_names();
  const Scenario s = make_scenario(names[static_cast<std::size_t>(state.range(0))]);
  for (auto _ : state) {
    benchmark::DoNotOptimize(run(s.space, s.objective, s.family, Schedule{}, s.canonical_start, {}));
  }
  state.SetLabel(s.name);
}
BENCHMARK(BM_ScenarioRun)->DenseRange(0, 7)->Unit(benchmark::kMicrosecond);

void BM_AsymptoticCenter(benchmark::State& state) {
  const Space X = space_for(static_cast<int>(state.range(0)));
  const auto pts = sample(X, static_cast<int>(state.range(1)), 5);
  for (auto _ : state) benchmark::DoNotOptimize(asymptotic_center(X, pts));
  state.SetLabel(backend_name(X.backend()));
}
BENCHMARK(BM_AsymptoticCenter)->ArgsProduct({{0, 1, 2}, {10, 100}})->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
