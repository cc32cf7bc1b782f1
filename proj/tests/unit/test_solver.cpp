#include <doctest.h>

#include <cmath>
#include <numbers>

#include "warpgraph/errors.hpp"
#include "warpgraph/geometry.hpp"
#include "warpgraph/solver.hpp"

using namespace warpgraph;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

FiberGrid torus1(int n, double extent = 1.0) {
  return FiberGrid::torus({GridAxis{0.0, extent, n}});
}

FiberGrid torus2(int n) {
  return FiberGrid::torus({GridAxis{0.0, 1.0, n}, GridAxis{0.0, 1.0, n}});
}

}  // namespace

TEST_CASE("newton reaches the minimal slice of cosh") {
  const FiberGrid g = torus1(64);
  const WarpingFunction f = presets::cosh_t();
  const ScalarField u0 = ScalarField::sample(
      g, [](double x, double) { return 0.3 * std::sin(kTwoPi * x); });
  SolverConfig cfg;
  cfg.tol_residual = 1e-12;
  const auto [u, rep] = solve_minimal(g, f, u0, cfg);
  REQUIRE(rep.converged);
  CHECK(rep.iterations <= 30);
  CHECK(u.stddev() < 1e-8);
  CHECK(std::abs(u.mean()) < 1e-6);
}

TEST_CASE("newton on the 2-D torus from a separable wave start") {
  const FiberGrid g = torus2(32);
  const WarpingFunction f = presets::cosh_t();
  const ScalarField u0 = ScalarField::sample(g, [](double x, double y) {
    return 0.3 * std::sin(kTwoPi * x) * std::cos(kTwoPi * y);
  });
  SolverConfig cfg;
  cfg.tol_residual = 1e-12;
  const auto [u, rep] = solve_minimal(g, f, u0, cfg);
  REQUIRE(rep.converged);
  CHECK(u.stddev() < 1e-8);
  CHECK(std::abs(u.mean()) < 1e-6);
}

TEST_CASE("product case: every start relaxes to a constant (bordered solve)") {
  const FiberGrid g = torus1(48);
  const WarpingFunction one = presets::constant();
  const ScalarField u0 = ScalarField::sample(
      g, [](double x, double) { return 0.4 * std::sin(kTwoPi * x) + 1.0; });
  SolverConfig cfg;
  cfg.tol_residual = 1e-12;
  const auto [u, rep] = solve_minimal(g, one, u0, cfg);
  REQUIRE(rep.converged);
  CHECK(u.stddev() < 1e-8);
}

TEST_CASE("dirichlet line: straight segment is the exact solution") {
  const FiberGrid g = FiberGrid::box({GridAxis{0.0, 1.0, 65}});
  const WarpingFunction one = presets::constant();
  // boundary values u(0) = 0, u(1) = 1 held from u0
  const ScalarField u0 = ScalarField::sample(g, [](double x, double) {
    return x + 0.3 * std::sin(std::numbers::pi * x) * x * (1.0 - x);
  });
  SolverConfig cfg;
  cfg.tol_residual = 1e-13;
  const auto [u, rep] = solve_minimal(g, one, u0, cfg);
  REQUIRE(rep.converged);
  double err = 0.0;
  for (std::size_t id = 0; id < g.node_count(); ++id) {
    err = std::max(err, std::abs(u[id] - g.position(id)[0]));
  }
  CHECK(err < 1e-8);
}

TEST_CASE("solver reports are deterministic") {
  const FiberGrid g = torus2(16);
  const WarpingFunction f = presets::cosh_t();
  ScalarField u0 = seeded_fourier_field(g, 42);
  for (double& v : u0.values) v *= 0.2;
  SolverConfig cfg;
  cfg.tol_residual = 1e-11;
  const auto [u1, r1] = solve_minimal(g, f, u0, cfg);
  const auto [u2, r2] = solve_minimal(g, f, u0, cfg);
  REQUIRE(r1.converged);
  REQUIRE(r2.converged);
  CHECK(r1.iterations == r2.iterations);
  REQUIRE(r1.residual_history.size() == r2.residual_history.size());
  for (std::size_t i = 0; i < r1.residual_history.size(); ++i) {
    CHECK(r1.residual_history[i] == r2.residual_history[i]);
  }
  for (std::size_t id = 0; id < g.node_count(); ++id) {
    CHECK(u1[id] == u2[id]);
  }
}

TEST_CASE("non-convergence is a report, not an exception") {
  const FiberGrid g = torus1(32);
  const WarpingFunction f = presets::cosh_t();
  const ScalarField u0 = ScalarField::sample(
      g, [](double x, double) { return 0.5 * std::sin(kTwoPi * x); });
  SolverConfig cfg;
  cfg.tol_residual = 1e-12;
  cfg.max_iter = 1;
  const auto [u, rep] = solve_minimal(g, f, u0, cfg);
  CHECK_FALSE(rep.converged);
  CHECK(rep.message == "max_iter reached");
  CHECK(rep.residual_history.size() >= 2);
}

TEST_CASE("descent decreases the volume monotonically") {
  const FiberGrid g = torus1(32);
  const WarpingFunction f = presets::cosh_t();
  const ScalarField u0 = ScalarField::sample(
      g, [](double x, double) { return 0.3 * std::sin(kTwoPi * x); });
  SolverConfig cfg;
  cfg.method = SolveMethod::Descent;
  cfg.tol_residual = 1e-6;
  cfg.max_iter = 400;

  // re-run the iteration manually to watch the volume
  double prev = volume(g, f, u0);
  const auto [u, rep] = solve_minimal(g, f, u0, cfg);
  CHECK(volume(g, f, u) <= prev);
  CHECK(rep.residual_history.back() < rep.residual_history.front());
}

TEST_CASE("flow relaxation") {
  const WarpingFunction f = presets::cosh_t();
  SUBCASE("minimal slice is a fixed point") {
    const FiberGrid g = torus1(16);
    ScalarField u0(g);  // u = 0, f'(0) = 0
    SolverConfig cfg;
    cfg.max_iter = 50;
    cfg.tol_residual = 1e-30;  // run all steps
    const auto out = flow_relax(g, f, u0, cfg, 10);
    for (const ScalarField& snap : out.trajectory) {
      CHECK(snap.max_abs() == 0.0);
    }
  }
  SUBCASE("product case decays toward a constant") {
    const FiberGrid g = torus1(16, kTwoPi);
    const ScalarField u0 = ScalarField::sample(
        g, [](double x, double) { return std::sin(x); });
    SolverConfig cfg;
    cfg.max_iter = 4000;
    cfg.tol_residual = 1e-8;
    const auto out = flow_relax(g, presets::constant(), u0, cfg, 25);
    REQUIRE(out.report.converged);
    CHECK(out.trajectory.back().stddev() < 1e-6);
    // residual monotone after the first few steps
    const auto& hist = out.report.residual_history;
    for (std::size_t i = 11; i < hist.size(); ++i) {
      CHECK(hist[i] <= hist[i - 1] * (1.0 + 1e-12));
    }
    // the flow never increases the volume between snapshots
    double prev = volume(g, presets::constant(), out.trajectory.front());
    for (std::size_t i = 1; i < out.trajectory.size(); ++i) {
      const double v = volume(g, presets::constant(), out.trajectory[i]);
      CHECK(v <= prev * (1.0 + 1e-12));
      prev = v;
    }
  }
  SUBCASE("flow aborts with diagnostics when it leaves the domain") {
    // f' > 0 everywhere pushes u downward; the narrow domain is exited
    const WarpingFunction fexp = presets::exp_t().restricted({-0.5, 0.5});
    const FiberGrid g = torus1(16);
    ScalarField u0(g);  // u = 0, R = -n exp'(0)/exp(0) = -1
    SolverConfig cfg;
    cfg.max_iter = 100000;
    cfg.tol_residual = 1e-14;
    const auto out = flow_relax(g, fexp, u0, cfg);
    CHECK_FALSE(out.report.converged);
    CHECK(out.report.message.find("blow-up") != std::string::npos);
  }
  SUBCASE("cosh start at 0.5 relaxes to the minimal slice at 0") {
    const FiberGrid g = torus1(16, kTwoPi);
    ScalarField u0(g);
    std::fill(u0.values.begin(), u0.values.end(), 0.5);
    SolverConfig cfg;
    cfg.max_iter = 3000;
    cfg.tol_residual = 1e-9;
    const auto out = flow_relax(g, f, u0, cfg);
    REQUIRE(out.report.converged);
    CHECK(std::abs(out.trajectory.back().mean()) < 1e-8);
  }
}

TEST_CASE("psi transform") {
  SUBCASE("f = 1 reduces to a shift") {
    const PsiTransform psi(presets::constant(), 0.75);
    for (double t : {-2.0, 0.0, 1.5}) {
      CHECK(psi.forward(t) == doctest::Approx(t - 0.75).epsilon(1e-12));
    }
    const FiberGrid g = torus1(24);
    const ScalarField u = ScalarField::sample(
        g, [](double x, double) { return 0.3 * std::sin(kTwoPi * x) + 1.0; });
    const ScalarField v = psi.forward_field(u);
    const ScalarField tr = transformed_residual(g, presets::constant(), v, psi);
    const ScalarField mr = ms_residual(g, presets::constant(), u);
    for (std::size_t id = 0; id < g.node_count(); ++id) {
      CHECK(tr[id] == doctest::Approx(mr[id]).epsilon(1e-10));
    }
  }
  SUBCASE("f = exp has the closed form psi(t) = e^{-ref} - e^{-t}") {
    const PsiTransform psi(presets::exp_t(), 0.3);
    for (double t : {-1.0, 0.0, 0.3, 2.0}) {
      CHECK(psi.forward(t) ==
            doctest::Approx(std::exp(-0.3) - std::exp(-t)).epsilon(1e-10));
      CHECK(psi.inverse(psi.forward(t)) == doctest::Approx(t).epsilon(1e-10));
    }
    // values above the range of psi are rejected
    CHECK_THROWS_AS(psi.inverse(std::exp(-0.3) + 0.5), DomainError);
  }
  SUBCASE("transformed residual vanishes on minimal slices") {
    const FiberGrid g = torus2(16);
    const WarpingFunction f = presets::cosh_t();
    ScalarField u(g);  // slice at 0
    const PsiTransform psi(f, 0.0);
    const ScalarField v = psi.forward_field(u);
    CHECK(transformed_residual(g, f, v, psi).max_abs() < 1e-10);
  }
}

TEST_CASE("phi map is increasing, odd and bounded by 1") {
  double prev = -2.0;
  for (int i = -50; i <= 50; ++i) {
    const double x = 0.2 * i;
    const double y = phi_map(x);
    CHECK(std::abs(y) < 1.0);
    CHECK(y > prev);
    CHECK(phi_map(-x) == doctest::Approx(-y));
    prev = y;
  }
}

TEST_CASE("seeded fields are reproducible and normalized") {
  const FiberGrid g = torus2(16);
  const ScalarField a = seeded_fourier_field(g, 7);
  const ScalarField b = seeded_fourier_field(g, 7);
  const ScalarField c = seeded_fourier_field(g, 8);
  CHECK(a.max_abs() == doctest::Approx(1.0));
  bool same = true, diff = false;
  for (std::size_t id = 0; id < g.node_count(); ++id) {
    same = same && a[id] == b[id];
    diff = diff || a[id] != c[id];
  }
  CHECK(same);
  CHECK(diff);
}
