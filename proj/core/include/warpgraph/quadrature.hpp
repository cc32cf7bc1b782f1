#pragma once

#include <functional>
#include <optional>

namespace warpgraph {

using RealFn = std::function<double(double)>;

struct QuadratureResult {
  double value = 0.0;
  double error_estimate = 0.0;
};

/// Adaptive Simpson on a finite interval. Converges to `tol` absolute error
/// for smooth integrands; `max_depth` bounds the recursion.
QuadratureResult integrate(const RealFn& f, double a, double b,
                           double tol = 1e-12, int max_depth = 40);

enum class IntegralVerdict { Finite, Divergent, Indeterminate };

struct ImproperResult {
  IntegralVerdict verdict = IntegralVerdict::Indeterminate;
  double value = 0.0;           // meaningful only when verdict == Finite
  double error_estimate = 0.0;  // quadrature tolerance + last tail window
  bool finite() const { return verdict == IntegralVerdict::Finite; }
};

struct ImproperConfig {
  double tol = 1e-10;          // per-window quadrature tolerance
  double divergence_cap = 1e12;  // partial sums beyond this are divergent
  int max_windows = 64;        // doubling / halving budget
  double tail_ratio = 0.9;     // windows not shrinking by this ratio count
                               // toward the indeterminate budget
};

/// Improper integral of a nonnegative-ish integrand toward an endpoint.
///
/// The window sequence doubles toward an infinite endpoint (or halves toward
/// a finite one) and the partial sums are classified: Finite when the tail
/// window contribution drops below tol relative to the sum twice in a row,
/// Divergent when the partial sum passes the cap, Indeterminate when the
/// budget runs out without either happening.
///
/// `endpoint` is +/-infinity or a finite value; `c` is the fixed interior
/// anchor of the integral.
ImproperResult improper_integral(const RealFn& f, double c, double endpoint,
                                 const ImproperConfig& cfg = {});

}  // namespace warpgraph
