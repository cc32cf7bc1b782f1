#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "warpgraph/operators.hpp"

using namespace warpgraph;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

FiberGrid torus1(int n, double extent = 1.0) {
  return FiberGrid::torus({GridAxis{0.0, extent, n}});
}

FiberGrid torus2(int n) {
  return FiberGrid::torus({GridAxis{0.0, 1.0, n}, GridAxis{0.0, 1.0, n}});
}

ScalarField random_field(const FiberGrid& g, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  ScalarField out(g);
  for (double& v : out.values) v = d(rng);
  return out;
}

}  // namespace

TEST_CASE("grid bookkeeping") {
  const FiberGrid t = torus2(8);
  CHECK(t.node_count() == 64);
  CHECK(t.spacing(0) == doctest::Approx(1.0 / 8));
  CHECK(t.index(3, 2) == 19);  // row-major, x fastest
  const auto c = t.coords_of(19);
  CHECK(c[0] == 3);
  CHECK(c[1] == 2);

  const FiberGrid b = FiberGrid::box({GridAxis{-1.0, 2.0, 9}});
  CHECK(b.spacing(0) == doctest::Approx(0.25));
  CHECK(b.coordinate(0, 8) == doctest::Approx(1.0));

  // trapezoid weights sum to the volume times sqrt(det g)
  double w = 0.0;
  for (std::size_t id = 0; id < b.node_count(); ++id) w += b.cell_weight(id);
  CHECK(w == doctest::Approx(2.0).epsilon(1e-14));

  const FiberGrid m = FiberGrid::torus({GridAxis{0.0, 1.0, 8}}, {4.0, 1.0});
  double wm = 0.0;
  for (std::size_t id = 0; id < m.node_count(); ++id) wm += m.cell_weight(id);
  CHECK(wm == doctest::Approx(2.0).epsilon(1e-14));  // sqrt(4) * 1
}

TEST_CASE("gradient basics") {
  const FiberGrid g = torus1(64);
  SUBCASE("constant field has zero gradient") {
    ScalarField phi(g);
    std::fill(phi.values.begin(), phi.values.end(), 3.25);
    const VectorField d = gradient(phi);
    for (std::size_t id = 0; id < g.node_count(); ++id) {
      CHECK(d.at(0, id) == 0.0);
    }
  }
  SUBCASE("sin mode differentiates at second order") {
    auto err_at = [](int n) {
      const FiberGrid grid = torus1(n);
      const ScalarField phi = ScalarField::sample(
          grid, [](double x, double) { return std::sin(kTwoPi * x); });
      const VectorField d = gradient(phi);
      double err = 0.0;
      for (std::size_t id = 0; id < grid.node_count(); ++id) {
        const double x = grid.position(id)[0];
        err = std::max(err,
                       std::abs(d.at(0, id) - kTwoPi * std::cos(kTwoPi * x)));
      }
      return err;
    };
    const double e1 = err_at(32), e2 = err_at(64);
    CHECK(std::log2(e1 / e2) > 1.9);
  }
  SUBCASE("affine on a bounded grid is exact everywhere") {
    const FiberGrid grid = FiberGrid::box({GridAxis{0.0, 1.0, 17}});
    const ScalarField phi =
        ScalarField::sample(grid, [](double x, double) { return 3.0 * x; });
    const VectorField d = gradient(phi);
    for (std::size_t id = 0; id < grid.node_count(); ++id) {
      CHECK(d.at(0, id) == doctest::Approx(3.0).epsilon(1e-13));
    }
  }
}

TEST_CASE("divergence is the exact negative adjoint of gradient (periodic)") {
  for (int dim = 1; dim <= 2; ++dim) {
    const FiberGrid g = dim == 1 ? torus1(24) : torus2(12);
    const ScalarField phi = random_field(g, 11 + dim);
    VectorField x(g);
    const ScalarField tmp = random_field(g, 99 + dim);
    for (int a = 0; a < dim; ++a) {
      const ScalarField comp = random_field(g, 7 * (a + 1) + dim);
      for (std::size_t id = 0; id < g.node_count(); ++id) {
        x.at(a, id) = comp[id];
      }
    }
    const double lhs = inner(gradient(phi), x);
    const double rhs = -inner(phi, divergence(x));
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-13));
    (void)tmp;
  }
}

TEST_CASE("divergence of a constant field vanishes on tori") {
  const FiberGrid g = torus2(16);
  VectorField x(g);
  for (std::size_t id = 0; id < g.node_count(); ++id) {
    x.at(0, id) = 1.5;
    x.at(1, id) = -0.5;
  }
  CHECK(divergence(x).max_abs() <= 1e-14);
}

TEST_CASE("metric matrices") {
  const WarpingFunction f = presets::cosh_t();
  SUBCASE("slice: G = f(t0)^2 I on a flat 2-D fiber") {
    const FiberGrid g = torus2(8);
    ScalarField u(g);
    std::fill(u.values.begin(), u.values.end(), 0.7);
    const auto m = metric_matrix(g, MetricKind::graph(u, f), 5);
    const double expect = std::cosh(0.7) * std::cosh(0.7);
    CHECK(m(0, 0) == doctest::Approx(expect).epsilon(1e-14));
    CHECK(m(1, 1) == doctest::Approx(expect).epsilon(1e-14));
    CHECK(m(0, 1) == doctest::Approx(0.0));
    // conformal metric of a slice is the fiber metric
    const auto c = metric_matrix(g, MetricKind::conformal(u, f), 5);
    CHECK(c(0, 0) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(c(1, 1) == doctest::Approx(1.0).epsilon(1e-14));
  }
  SUBCASE("f = 1, Du = (1, 0): G = diag(2, 1)") {
    const FiberGrid g = FiberGrid::box(
        {GridAxis{0.0, 1.0, 9}, GridAxis{0.0, 1.0, 9}});
    const WarpingFunction one = presets::constant();
    const ScalarField u =
        ScalarField::sample(g, [](double x, double) { return x; });
    const auto m = metric_matrix(g, MetricKind::graph(u, one), g.index(4, 4));
    CHECK(m(0, 0) == doctest::Approx(2.0).epsilon(1e-13));
    CHECK(m(1, 1) == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(m(0, 1) == doctest::Approx(0.0));
  }
}

TEST_CASE("grad_norm_sq") {
  const FiberGrid g = torus2(24);
  const WarpingFunction f = presets::cosh_t();
  SUBCASE("slice gives zero") {
    ScalarField u(g);
    std::fill(u.values.begin(), u.values.end(), 0.3);
    CHECK(grad_norm_sq(MetricKind::graph(u, f), u).max_abs() <= 1e-16);
  }
  SUBCASE("rank-one identity |grad u|^2 = |Du|^2 / (f^2 + |Du|^2)") {
    const ScalarField u = ScalarField::sample(g, [](double x, double y) {
      return 0.2 * std::sin(kTwoPi * x) * std::cos(kTwoPi * y);
    });
    const ScalarField q = grad_norm_sq(MetricKind::graph(u, f), u);
    const VectorField du = gradient(u);
    for (std::size_t id = 0; id < g.node_count(); ++id) {
      const double dsq = du.at(0, id) * du.at(0, id) +
                         du.at(1, id) * du.at(1, id);
      const double fv = f.value(u[id]);
      CHECK(q[id] ==
            doctest::Approx(dsq / (fv * fv + dsq)).epsilon(1e-12));
    }
  }
  SUBCASE("fiber metric returns |Du|^2") {
    const ScalarField u = ScalarField::sample(
        g, [](double x, double) { return std::sin(kTwoPi * x); });
    const ScalarField q = grad_norm_sq(MetricKind::fiber(), u);
    const VectorField du = gradient(u);
    for (std::size_t id = 0; id < g.node_count(); ++id) {
      const double dsq = du.at(0, id) * du.at(0, id) +
                         du.at(1, id) * du.at(1, id);
      CHECK(q[id] == doctest::Approx(dsq).epsilon(1e-13));
    }
  }
}

TEST_CASE("laplace-beltrami") {
  SUBCASE("constant field maps to zero") {
    const FiberGrid g = torus2(16);
    ScalarField phi(g);
    std::fill(phi.values.begin(), phi.values.end(), 2.0);
    CHECK(laplace_beltrami(MetricKind::fiber(), phi).max_abs() <= 1e-14);
  }
  SUBCASE("flat torus eigenfunction converges at second order") {
    auto err_at = [](int n) {
      const FiberGrid g = torus1(n);
      const ScalarField phi = ScalarField::sample(
          g, [](double x, double) { return std::sin(kTwoPi * x); });
      const ScalarField lap = laplace_beltrami(MetricKind::fiber(), phi);
      double err = 0.0;
      for (std::size_t id = 0; id < g.node_count(); ++id) {
        const double x = g.position(id)[0];
        err = std::max(err, std::abs(lap[id] + kTwoPi * kTwoPi *
                                                   std::sin(kTwoPi * x)));
      }
      return err;
    };
    CHECK(std::log2(err_at(32) / err_at(64)) > 1.9);
  }
}

TEST_CASE("div(grad) composes into the flat Laplacian stencil exactly") {
  const FiberGrid g = torus2(16);
  const ScalarField phi = ScalarField::sample(g, [](double x, double y) {
    return std::sin(kTwoPi * x) + 0.5 * std::cos(kTwoPi * (x + 2.0 * y));
  });
  const ScalarField composed = divergence(gradient(phi));
  const ScalarField direct = laplace_beltrami(MetricKind::fiber(), phi);
  for (std::size_t id = 0; id < g.node_count(); ++id) {
    CHECK(composed[id] == doctest::Approx(direct[id]).epsilon(1e-13));
  }
}

TEST_CASE("metric eigen bounds") {
  const FiberGrid g = torus2(12);
  const WarpingFunction f = presets::cosh_t();
  SUBCASE("identical kinds give (1, 1)") {
    const auto [lo, hi] =
        metric_eigen_bounds(g, MetricKind::fiber(), MetricKind::fiber());
    CHECK(lo == doctest::Approx(1.0));
    CHECK(hi == doctest::Approx(1.0));
  }
  SUBCASE("conformal metric of a slice equals the fiber metric") {
    ScalarField u(g);
    std::fill(u.values.begin(), u.values.end(), 0.4);
    const auto [lo, hi] = metric_eigen_bounds(g, MetricKind::conformal(u, f),
                                              MetricKind::fiber());
    CHECK(lo == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(hi == doctest::Approx(1.0).epsilon(1e-12));
  }
  SUBCASE("rank-one structure: range is [1, 1 + max |Du|^2/f^2]") {
    const ScalarField u = ScalarField::sample(g, [](double x, double y) {
      return 0.15 * std::sin(kTwoPi * x) + 0.1 * std::cos(kTwoPi * y);
    });
    const auto [lo, hi] = metric_eigen_bounds(g, MetricKind::conformal(u, f),
                                              MetricKind::fiber());
    const VectorField du = gradient(u);
    double peak = 0.0;
    for (std::size_t id = 0; id < g.node_count(); ++id) {
      const double dsq = du.at(0, id) * du.at(0, id) +
                         du.at(1, id) * du.at(1, id);
      const double fv = f.value(u[id]);
      peak = std::max(peak, dsq / (fv * fv));
    }
    CHECK(lo == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(hi == doctest::Approx(1.0 + peak).epsilon(1e-12));
  }
}
