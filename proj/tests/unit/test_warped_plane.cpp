#include <doctest.h>

#include <cmath>

#include "warpgraph/warped_plane.hpp"

using namespace warpgraph;

TEST_CASE("first integral of the bounded solution is exactly 1") {
  const auto f = presets::sqrt1p_cosh4();
  const auto xs = uniform_samples(-10.0, 10.0, 10001);
  const auto scan = first_integral(f, curves::tanh_x(), xs);
  CHECK(scan.median_c == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(scan.max_deviation < 1e-12);
}

TEST_CASE("first integral of the unbounded solution is exactly 1") {
  const auto h = presets::quartic_rational();
  const auto xs = uniform_samples(-10.0, 10.0, 10001);
  const auto scan = first_integral(h, curves::x_plus_arctan(), xs);
  CHECK(scan.median_c == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(scan.max_deviation < 1e-12);
}

TEST_CASE("constant sections carry zero flux") {
  const auto scan = first_integral(presets::cosh_t(), curves::constant(2.5),
                                   uniform_samples(-3.0, 3.0, 101));
  CHECK(scan.median_c == 0.0);
  CHECK(scan.max_deviation == 0.0);
}

TEST_CASE("ode integration of u' = C / sqrt(h^2 - C^2)") {
  SUBCASE("C = 0 keeps the section constant") {
    const auto sol = ode_solve(presets::cosh_t(), 0.0, 0.0, 1.25, -2.0, 2.0);
    for (double u : sol.us) CHECK(u == 1.25);
  }
  SUBCASE("recovers tanh from its first integral") {
    const auto sol = ode_solve(presets::sqrt1p_cosh4(), 1.0, 0.0, 0.0, -5.0, 5.0);
    REQUIRE_FALSE(sol.hit_singularity);
    double err = 0.0;
    for (std::size_t i = 0; i < sol.xs.size(); ++i) {
      err = std::max(err, std::abs(sol.us[i] - std::tanh(sol.xs[i])));
    }
    CHECK(err < 1e-6);
  }
  SUBCASE("f = 1, C = 1/sqrt(2) gives the affine section u' = 1") {
    const auto sol = ode_solve(presets::constant(), 1.0 / std::sqrt(2.0), 0.0,
                               0.5, -1.0, 3.0);
    for (std::size_t i = 0; i < sol.xs.size(); ++i) {
      CHECK(sol.us[i] == doctest::Approx(0.5 + sol.xs[i]).epsilon(1e-10));
    }
  }
  SUBCASE("stops at the singular reach when h^2 - C^2 hits zero") {
    // h in [sqrt(5)/2, sqrt(2)); C = 1.2 is singular near |x| ~ 0.98
    const auto sol =
        ode_solve(presets::quartic_rational(), 1.2, 3.0, 0.0, 0.0, 5.0);
    CHECK(sol.hit_singularity);
    CHECK(sol.reach_lo > 0.9);
    CHECK(sol.reach_lo < 1.1);
  }
}

TEST_CASE("analytic plane residual of the exact solutions vanishes") {
  const auto f = presets::sqrt1p_cosh4();
  const auto u = curves::tanh_x();
  for (double x : uniform_samples(-8.0, 8.0, 401)) {
    CHECK(std::abs(plane_residual(f, u, x)) < 1e-12);
  }
  const auto h = presets::quartic_rational();
  const auto w = curves::x_plus_arctan();
  for (double x : uniform_samples(-8.0, 8.0, 401)) {
    CHECK(std::abs(plane_residual(h, w, x)) < 1e-12);
  }
}

TEST_CASE("witness Laplacian: sign and displayed value") {
  const auto f = presets::sqrt1p_cosh4();
  const auto v = curves::sech_sq();
  for (double x : uniform_samples(-5.0, 5.0, 501)) {
    const double lap = plane_laplacian(f, v, x);
    CHECK(lap < -1e-12);  // the positive witness is strictly superharmonic
    CHECK(-lap ==
          doctest::Approx(displayed_witness_laplacian(x)).epsilon(1e-12));
  }
}

TEST_CASE("discrete warped-plane Laplacian converges to the analytic one") {
  const auto f = presets::sqrt1p_cosh4();
  const auto v = curves::sech_sq();
  auto err_at = [&](int n) {
    const FiberGrid line = FiberGrid::box({GridAxis{-5.0, 10.0, n}});
    const ScalarField phi = ScalarField::sample(
        line, [&](double x, double) { return v.value(x); });
    const ScalarField lap = warped_plane_laplacian(line, f, phi);
    double err = 0.0;
    for (std::size_t id = 0; id < line.node_count(); ++id) {
      if (!line.interior(id)) continue;
      const double x = line.position(id)[0];
      err = std::max(err, std::abs(lap[id] - plane_laplacian(f, v, x)));
    }
    return err;
  };
  CHECK(std::log2(err_at(501) / err_at(1001)) > 1.85);
}
