#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "warpgraph/quadrature.hpp"

namespace warpgraph {

/// Open interval (a, b), endpoints possibly infinite. Endpoint values are
/// never evaluated.
struct IntervalDomain {
  double lower = -std::numeric_limits<double>::infinity();
  double upper = std::numeric_limits<double>::infinity();

  static IntervalDomain real() { return {}; }

  bool contains(double t) const { return t > lower && t < upper; }
  bool finite_lower() const { return std::isfinite(lower); }
  bool finite_upper() const { return std::isfinite(upper); }
  double span() const { return upper - lower; }
};

/// A positive warping function on an open interval, with two derivatives.
/// Immutable after construction and safe to share across threads.
class WarpingFunction {
 public:
  WarpingFunction(std::string name, IntervalDomain domain, RealFn value,
                  RealFn deriv, RealFn deriv2);

  const std::string& name() const { return name_; }
  const IntervalDomain& domain() const { return domain_; }

  // Unchecked fast-path accessors; callers keep t inside the domain.
  double value(double t) const { return value_(t); }
  double deriv(double t) const { return deriv_(t); }
  double deriv2(double t) const { return deriv2_(t); }

  /// (log f)'' = (f'' f - f'^2) / f^2
  double log_deriv2(double t) const {
    const double f = value_(t), d1 = deriv_(t), d2 = deriv2_(t);
    return (d2 * f - d1 * d1) / (f * f);
  }

  /// Restrict to a sub-interval of the current domain.
  WarpingFunction restricted(IntervalDomain sub) const;

 private:
  std::string name_;
  IntervalDomain domain_;
  RealFn value_, deriv_, deriv2_;
};

struct EvalBundle {
  double f;
  double d1;
  double d2;
  double log_d2;
};

/// Evaluate (f, f', f'', (log f)'') at t. Throws DomainError if t is outside
/// the open domain.
EvalBundle eval_bundle(const WarpingFunction& f, double t);

// ---------------------------------------------------------------------------
// Presets (hand-coded analytic derivatives)

namespace presets {

WarpingFunction constant(double c = 1.0);
WarpingFunction cosh_t();
WarpingFunction exp_t();
/// f(x) = sqrt(1 + cosh^4 x)
WarpingFunction sqrt1p_cosh4();
/// h(x) = sqrt(2x^4 + 6x^2 + 5) / (x^2 + 2), pinched into [sqrt(5)/2, sqrt(2))
WarpingFunction quartic_rational();

/// Factory by preset name ("constant", "cosh", "exp", "sqrt1pcosh4",
/// "quartic_rational"); optional domain restriction. Throws Error on an
/// unknown name.
WarpingFunction by_name(const std::string& name,
                        std::optional<IntervalDomain> domain = {});

std::vector<std::string> names();

}  // namespace presets

/// Warping from samples (t_i, f_i): natural cubic spline with consistent
/// first and second derivatives. Domain is the open hull of the samples.
WarpingFunction tabulated_warping(std::vector<double> ts,
                                  std::vector<double> fs);

// ---------------------------------------------------------------------------
// Classification

enum class Monotonicity { NonIncreasing, NonDecreasing, NonMonotone, Constant };

std::string to_string(Monotonicity m);

struct EndpointIntegral {
  IntegralVerdict verdict = IntegralVerdict::Indeterminate;
  double value = 0.0;
  double error_estimate = 0.0;
  bool finite() const { return verdict == IntegralVerdict::Finite; }
};

enum class Side { Lower, Upper };  // endpoint a, endpoint b

/// Decide f in L^1(a) (Side::Lower) or L^1(b) (Side::Upper): the improper
/// integral of f from the anchor c to the endpoint. If c is not given it
/// defaults to the midpoint of the finite sample box.
EndpointIntegral endpoint_integral(const WarpingFunction& f, Side side,
                                   const ImproperConfig& cfg = {},
                                   std::optional<double> c = {});

struct SampleConfig {
  int samples = 2001;            // >= 1000 by default
  double box_halfwidth = 20.0;   // clip infinite domains to +/- this
  double flat_window_fraction = 1.0 / 50.0;  // delta = span / 50
  double flat_eps = 1e-10;
  double tol = 1e-9;  // sign tolerance for monotonicity / log-convexity
  std::optional<std::pair<double, double>> box;  // explicit sample box
  ImproperConfig improper;
};

struct WarpClassification {
  bool positive = false;
  double inf_f = 0.0;
  double sup_f = 0.0;  // over the sample box
  Monotonicity monotone = Monotonicity::NonMonotone;
  bool log_convex = false;
  bool non_locally_constant = false;
  EndpointIntegral l1_at_a;
  EndpointIntegral l1_at_b;
  std::vector<double> zeros_of_d1;
};

/// Sample-based classification against every hypothesis the uniqueness
/// theorems impose. Throws Error if a sample of f is non-positive.
WarpClassification classify_warping(const WarpingFunction& f,
                                    const SampleConfig& cfg = {});

/// The finite box the classifier samples (domain clipped to the config box,
/// inset strictly inside open endpoints).
std::pair<double, double> sample_box(const WarpingFunction& f,
                                     const SampleConfig& cfg);

}  // namespace warpgraph
