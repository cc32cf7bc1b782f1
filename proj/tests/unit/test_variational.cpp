#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <numbers>
#include <random>

#include "warpgraph/errors.hpp"
#include "warpgraph/variational.hpp"

using namespace warpgraph;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

ScalarField smooth_random(const FiberGrid& g, std::uint64_t seed, double amp) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  const double a1 = d(rng), a2 = d(rng), p1 = d(rng), p2 = d(rng);
  return ScalarField::sample(g, [&](double x, double y) {
    return amp * (a1 * std::sin(kTwoPi * x + p1) +
                  a2 * std::cos(kTwoPi * (x + y) + p2));
  });
}

}  // namespace

TEST_CASE("volume closed forms") {
  SUBCASE("slice on a unit-area torus: f(t0)^n") {
    const FiberGrid g =
        FiberGrid::torus({GridAxis{0.0, 1.0, 16}, GridAxis{0.0, 1.0, 16}});
    const WarpingFunction f = presets::cosh_t();
    ScalarField u(g);
    std::fill(u.values.begin(), u.values.end(), 0.7);
    const double c = std::cosh(0.7);
    CHECK(discrete_volume(g, f, u) == doctest::Approx(c * c).epsilon(1e-14));
  }
  SUBCASE("f = 1, planar graph u = a x over the unit square: sqrt(1+a^2)") {
    const FiberGrid g =
        FiberGrid::box({GridAxis{0.0, 1.0, 21}, GridAxis{0.0, 1.0, 21}});
    const WarpingFunction one = presets::constant();
    const ScalarField u =
        ScalarField::sample(g, [](double x, double) { return 0.75 * x; });
    CHECK(discrete_volume(g, one, u) ==
          doctest::Approx(std::sqrt(1.0 + 0.75 * 0.75)).epsilon(1e-14));
  }
  SUBCASE("f = 1, u = 0 on the unit torus: 1") {
    const FiberGrid g =
        FiberGrid::torus({GridAxis{0.0, 1.0, 8}, GridAxis{0.0, 1.0, 8}});
    CHECK(discrete_volume(g, presets::constant(), ScalarField(g)) ==
          doctest::Approx(1.0).epsilon(1e-15));
  }
}

TEST_CASE("volume gradient matches centered finite differences") {
  const FiberGrid g =
      FiberGrid::torus({GridAxis{0.0, 1.0, 12}, GridAxis{0.0, 1.0, 12}});
  const WarpingFunction f = presets::cosh_t();
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const ScalarField u = smooth_random(g, seed, 0.3);
    const ScalarField v = smooth_random(g, seed + 100, 1.0);
    const ScalarField grad = discrete_volume_gradient(g, f, u);
    const double eps = 1e-6;
    ScalarField up = u, um = u;
    for (std::size_t id = 0; id < g.node_count(); ++id) {
      up[id] += eps * v[id];
      um[id] -= eps * v[id];
    }
    const double fd =
        (discrete_volume(g, f, up) - discrete_volume(g, f, um)) / (2.0 * eps);
    double pairing = 0.0;
    for (std::size_t id = 0; id < g.node_count(); ++id) {
      pairing += grad[id] * v[id];
    }
    CHECK(pairing == doctest::Approx(fd).epsilon(1e-7));
  }
}

TEST_CASE("residual is the scaled volume gradient, exactly") {
  const FiberGrid g =
      FiberGrid::torus({GridAxis{0.0, 1.0, 10}, GridAxis{0.0, 1.0, 10}});
  const WarpingFunction f = presets::cosh_t();
  const ScalarField u = smooth_random(g, 31, 0.4);
  const ScalarField grad = discrete_volume_gradient(g, f, u);
  const ScalarField res = discrete_ms_residual(g, f, u);
  for (std::size_t id = 0; id < g.node_count(); ++id) {
    const double fv = f.value(u[id]);
    const double back = -res[id] * g.cell_weight(id) * fv * fv;  // n = 2
    CHECK(back == doctest::Approx(grad[id]).epsilon(1e-15));
  }
}

TEST_CASE("slice residual equals -n f'(t0)/f(t0)") {
  const WarpingFunction f = presets::cosh_t();
  SUBCASE("2-D torus") {
    const FiberGrid g =
        FiberGrid::torus({GridAxis{0.0, 1.0, 8}, GridAxis{0.0, 1.0, 8}});
    ScalarField u(g);
    std::fill(u.values.begin(), u.values.end(), 0.5);
    const ScalarField res = discrete_ms_residual(g, f, u);
    const double expect = -2.0 * std::tanh(0.5);
    for (std::size_t id = 0; id < g.node_count(); ++id) {
      CHECK(res[id] == doctest::Approx(expect).epsilon(1e-14));
    }
  }
  SUBCASE("minimal slice f'(0) = 0 and the product case give zero") {
    const FiberGrid g = FiberGrid::torus({GridAxis{0.0, 1.0, 8}});
    CHECK(discrete_ms_residual(g, f, ScalarField(g)).max_abs() <= 1e-15);
    ScalarField c(g);
    std::fill(c.values.begin(), c.values.end(), -1.3);
    CHECK(discrete_ms_residual(g, presets::constant(), c).max_abs() <= 1e-15);
  }
}

TEST_CASE("residual jacobian matches finite differences") {
  const WarpingFunction f = presets::cosh_t();
  for (int dim = 1; dim <= 2; ++dim) {
    const FiberGrid g =
        dim == 1 ? FiberGrid::torus({GridAxis{0.0, 1.0, 12}})
                 : FiberGrid::box({GridAxis{0.0, 1.0, 7}, GridAxis{0.0, 1.0, 7}});
    const ScalarField u = smooth_random(g, 17 + dim, 0.3);
    const FreeNodeMap map = free_nodes(g);
    const Eigen::MatrixXd jac =
        Eigen::MatrixXd(residual_jacobian(g, f, u, map));
    const double eps = 1e-6;
    double max_err = 0.0;
    for (std::size_t k = 0; k < map.size(); ++k) {
      ScalarField up = u, um = u;
      up[map.free_to_node[k]] += eps;
      um[map.free_to_node[k]] -= eps;
      const ScalarField rp = discrete_ms_residual(g, f, up);
      const ScalarField rm = discrete_ms_residual(g, f, um);
      for (std::size_t r = 0; r < map.size(); ++r) {
        const double fd =
            (rp[map.free_to_node[r]] - rm[map.free_to_node[r]]) / (2.0 * eps);
        max_err = std::max(
            max_err, std::abs(fd - jac(static_cast<Eigen::Index>(r),
                                       static_cast<Eigen::Index>(k))) /
                         std::max(1.0, std::abs(fd)));
      }
    }
    CHECK(max_err < 1e-7);
  }
}

TEST_CASE("domain violations name the offending nodes") {
  const FiberGrid g = FiberGrid::torus({GridAxis{0.0, 1.0, 8}});
  const WarpingFunction f = presets::exp_t().restricted({-1.0, 1.0});
  ScalarField u(g);
  u[3] = 2.0;
  bool threw = false;
  try {
    discrete_volume(g, f, u);
  } catch (const DomainError& e) {
    threw = true;
    CHECK(std::string(e.what()).find("first offenders: 3") !=
          std::string::npos);
  }
  CHECK(threw);
}
