#pragma once

#include <Eigen/Dense>
#include <utility>

#include "warpgraph/grid.hpp"
#include "warpgraph/warp.hpp"

namespace warpgraph {

/// Chart gradient D(phi): second-order central differences, periodic wrap or
/// one-sided stencils at bounded edges. Components are coordinate partials.
VectorField gradient(const ScalarField& phi);

/// Discrete divergence, defined as the exact negative adjoint of `gradient`
/// under the cell-weight inner product, so summation by parts holds to
/// round-off on periodic grids.
ScalarField divergence(const VectorField& x);

/// Central second derivative along one axis (one-sided at bounded edges).
ScalarField second_derivative(const ScalarField& phi, int axis);

/// Mixed partial by composed central differences (2-D grids).
ScalarField cross_derivative(const ScalarField& phi);

/// Cell-weighted inner products (the pairing `divergence` is adjoint to).
double inner(const ScalarField& a, const ScalarField& b);
double inner(const VectorField& a, const VectorField& b);

// ---------------------------------------------------------------------------
// Metrics

enum class MetricTag { FiberG, GraphGu, ConformalGhat };

/// Non-owning view selecting one of the three metrics in play: the fiber
/// metric g, the graph metric g_u = du^2 + f(u)^2 g, or the conformal metric
/// ghat = g_u / f(u)^2. `u` and `warp` must outlive the operation.
struct MetricKind {
  MetricTag tag = MetricTag::FiberG;
  const ScalarField* u = nullptr;
  const WarpingFunction* warp = nullptr;

  static MetricKind fiber() { return {MetricTag::FiberG, nullptr, nullptr}; }
  static MetricKind graph(const ScalarField& u, const WarpingFunction& f) {
    return {MetricTag::GraphGu, &u, &f};
  }
  static MetricKind conformal(const ScalarField& u, const WarpingFunction& f) {
    return {MetricTag::ConformalGhat, &u, &f};
  }
};

/// Metric matrix at one node (top-left dim x dim block meaningful; the spare
/// block of a 1-D grid is padded with 1). Throws NumericalError if the
/// result is not positive definite.
Eigen::Matrix2d metric_matrix(const FiberGrid& grid, const MetricKind& kind,
                              std::size_t node);

/// Pointwise G^{ij} d_i(phi) d_j(phi) >= 0.
ScalarField grad_norm_sq(const MetricKind& kind, const ScalarField& phi);

/// Laplace-Beltrami in the chosen metric:
///   (1/sqrt(det G)) d_i ( sqrt(det G) G^{ij} d_j phi )
/// built from the central-difference operators above.
ScalarField laplace_beltrami(const MetricKind& kind, const ScalarField& phi);

/// Range of generalized eigenvalues of kind_a relative to kind_b over all
/// nodes. The quasi-isometry constant is max(l_max, 1/l_min)^(1/2).
std::pair<double, double> metric_eigen_bounds(const FiberGrid& grid,
                                              const MetricKind& kind_a,
                                              const MetricKind& kind_b);

}  // namespace warpgraph
