#pragma once

#include <functional>
#include <vector>

#include "warpgraph/grid.hpp"
#include "warpgraph/warp.hpp"

namespace warpgraph {

// The 1-D reduction for ambient products R x (R x_h R): the fiber is the
// warped plane dx^2 + h(x)^2 dy^2 and everything depends on x only. Graphs
// of u(x) are minimal iff the flux h u' / sqrt(1 + u'^2) is constant.

/// A curve u(x) with analytic first and second derivatives.
struct PlaneCurve {
  RealFn value;
  RealFn deriv;
  RealFn deriv2;
};

namespace curves {

PlaneCurve constant(double v);
PlaneCurve tanh_x();
/// w(x) = x + arctan(x)
PlaneCurve x_plus_arctan();
/// 1/cosh^2(x)
PlaneCurve sech_sq();

}  // namespace curves

/// First integral C(x) = h(x) u'(x) / sqrt(1 + u'(x)^2) on samples;
/// constancy is measured as max |C - median(C)|.
struct FirstIntegralScan {
  std::vector<double> xs;
  std::vector<double> c_values;
  double median_c = 0.0;
  double max_deviation = 0.0;
};

FirstIntegralScan first_integral(const WarpingFunction& h, const PlaneCurve& u,
                                 const std::vector<double>& xs);

std::vector<double> uniform_samples(double lo, double hi, int count);

/// Integrate u' = C / sqrt(h(x)^2 - C^2) with classic RK4 from (x0, u0) in
/// both directions. Stops early (and reports the reach) if h^2 - C^2 hits
/// zero.
struct OdeSolution {
  std::vector<double> xs;
  std::vector<double> us;
  bool hit_singularity = false;
  double reach_lo = 0.0;
  double reach_hi = 0.0;
};

OdeSolution ode_solve(const WarpingFunction& h, double c_value, double x0,
                      double u0, double lo, double hi, int steps_per_unit = 2048);

/// Laplacian of an x-only function on the warped plane, analytically:
/// phi'' + (h'/h) phi'.
double plane_laplacian(const WarpingFunction& h, const PlaneCurve& phi,
                       double x);

/// MS residual of the graph of u over the warped plane, analytically:
/// (1/h) d/dx [ h u' / sqrt(1+u'^2) ].
double plane_residual(const WarpingFunction& h, const PlaneCurve& u, double x);

/// The rational expression the non-parabolicity discussion displays for the
/// Laplacian of -1/cosh^2 x on dx^2 + (1 + cosh^4 x) dy^2:
/// 2[(cosh^2 x - 1)^2 + 2] / [cosh^4 x (1 + cosh^4 x)].
double displayed_witness_laplacian(double x);

/// Discrete warped-plane Laplacian of a sampled field on a 1-D grid,
/// conservative form with half-point weights: (1/h) D-( h_{mid} D+ phi ).
ScalarField warped_plane_laplacian(const FiberGrid& line,
                                   const WarpingFunction& h,
                                   const ScalarField& phi);

}  // namespace warpgraph
