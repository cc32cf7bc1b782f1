#include <benchmark/benchmark.h>

#include <cmath>
#include <numbers>

#include "warpgraph/solver.hpp"
#include "warpgraph/warped_plane.hpp"

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void BM_newton_solve(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto g = warpgraph::FiberGrid::torus(
      {warpgraph::GridAxis{0.0, 1.0, n}, warpgraph::GridAxis{0.0, 1.0, n}});
  const auto f = warpgraph::presets::cosh_t();
  const auto u0 = warpgraph::ScalarField::sample(g, [](double x, double y) {
    return 0.2 * std::sin(kTwoPi * x) * std::cos(kTwoPi * y);
  });
  warpgraph::SolverConfig cfg;
  cfg.tol_residual = 1e-10;
  for (auto _ : state) {
    benchmark::DoNotOptimize(warpgraph::solve_minimal(g, f, u0, cfg));
  }
}
BENCHMARK(BM_newton_solve)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_first_integral_scan(benchmark::State& state) {
  const auto f = warpgraph::presets::sqrt1p_cosh4();
  const auto u = warpgraph::curves::tanh_x();
  const auto xs = warpgraph::uniform_samples(-10.0, 10.0, 10000);
  for (auto _ : state) {
    benchmark::DoNotOptimize(warpgraph::first_integral(f, u, xs));
  }
  state.SetItemsProcessed(state.iterations() * 10000);
}
BENCHMARK(BM_first_integral_scan);

}  // namespace
