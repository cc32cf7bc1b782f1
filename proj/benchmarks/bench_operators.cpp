#include <benchmark/benchmark.h>

#include <cmath>
#include <numbers>

#include "warpgraph/geometry.hpp"
#include "warpgraph/operators.hpp"
#include "warpgraph/variational.hpp"

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

warpgraph::FiberGrid torus2(int n) {
  return warpgraph::FiberGrid::torus(
      {warpgraph::GridAxis{0.0, 1.0, n}, warpgraph::GridAxis{0.0, 1.0, n}});
}

warpgraph::ScalarField wave(const warpgraph::FiberGrid& g) {
  return warpgraph::ScalarField::sample(g, [](double x, double y) {
    return 0.2 * std::sin(kTwoPi * x) * std::cos(kTwoPi * y);
  });
}

void BM_gradient(benchmark::State& state) {
  const auto g = torus2(static_cast<int>(state.range(0)));
  const auto u = wave(g);
  for (auto _ : state) {
    benchmark::DoNotOptimize(warpgraph::gradient(u));
  }
  state.SetItemsProcessed(state.iterations() *
                          static_cast<int64_t>(g.node_count()));
}
BENCHMARK(BM_gradient)->Arg(64)->Arg(128);

void BM_laplace_beltrami_graph(benchmark::State& state) {
  const auto g = torus2(static_cast<int>(state.range(0)));
  const auto f = warpgraph::presets::cosh_t();
  const auto u = wave(g);
  const auto kind = warpgraph::MetricKind::graph(u, f);
  for (auto _ : state) {
    benchmark::DoNotOptimize(warpgraph::laplace_beltrami(kind, u));
  }
  state.SetItemsProcessed(state.iterations() *
                          static_cast<int64_t>(g.node_count()));
}
BENCHMARK(BM_laplace_beltrami_graph)->Arg(64)->Arg(128);

void BM_ms_residual(benchmark::State& state) {
  const auto g = torus2(static_cast<int>(state.range(0)));
  const auto f = warpgraph::presets::cosh_t();
  const auto u = wave(g);
  for (auto _ : state) {
    benchmark::DoNotOptimize(warpgraph::discrete_ms_residual(g, f, u));
  }
  state.SetItemsProcessed(state.iterations() *
                          static_cast<int64_t>(g.node_count()));
}
BENCHMARK(BM_ms_residual)->Arg(64)->Arg(128);

void BM_volume_hessian(benchmark::State& state) {
  const auto g = torus2(static_cast<int>(state.range(0)));
  const auto f = warpgraph::presets::cosh_t();
  const auto u = wave(g);
  const auto map = warpgraph::free_nodes(g);
  for (auto _ : state) {
    benchmark::DoNotOptimize(warpgraph::volume_hessian(g, f, u, map));
  }
}
BENCHMARK(BM_volume_hessian)->Arg(64)->Arg(128);

void BM_assemble_state(benchmark::State& state) {
  const auto g = torus2(static_cast<int>(state.range(0)));
  const auto f = warpgraph::presets::cosh_t();
  const auto u = wave(g);
  for (auto _ : state) {
    benchmark::DoNotOptimize(warpgraph::assemble_state(g, f, u));
  }
}
BENCHMARK(BM_assemble_state)->Arg(64)->Arg(128);

}  // namespace
