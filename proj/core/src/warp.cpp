#include "warpgraph/warp.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <sstream>

#include "warpgraph/errors.hpp"

namespace warpgraph {

WarpingFunction::WarpingFunction(std::string name, IntervalDomain domain,
                                 RealFn value, RealFn deriv, RealFn deriv2)
    : name_(std::move(name)),
      domain_(domain),
      value_(std::move(value)),
      deriv_(std::move(deriv)),
      deriv2_(std::move(deriv2)) {
  if (!(domain_.lower < domain_.upper)) {
    throw Error("warping domain must satisfy a < b");
  }
}

WarpingFunction WarpingFunction::restricted(IntervalDomain sub) const {
  if (sub.lower < domain_.lower || sub.upper > domain_.upper) {
    throw Error("restriction must be a sub-interval of the domain");
  }
  return WarpingFunction(name_, sub, value_, deriv_, deriv2_);
}

EvalBundle eval_bundle(const WarpingFunction& f, double t) {
  if (!f.domain().contains(t)) {
    std::ostringstream os;
    os << "t = " << t << " outside the open domain (" << f.domain().lower
       << ", " << f.domain().upper << ") of warping '" << f.name() << "'";
    throw DomainError(os.str());
  }
  return {f.value(t), f.deriv(t), f.deriv2(t), f.log_deriv2(t)};
}

// ---------------------------------------------------------------------------
// Presets

namespace presets {

WarpingFunction constant(double c) {
  if (!(c > 0.0)) throw Error("constant warping must be positive");
  return WarpingFunction(
      "constant", IntervalDomain::real(), [c](double) { return c; },
      [](double) { return 0.0; }, [](double) { return 0.0; });
}

WarpingFunction cosh_t() {
  return WarpingFunction(
      "cosh", IntervalDomain::real(), [](double t) { return std::cosh(t); },
      [](double t) { return std::sinh(t); },
      [](double t) { return std::cosh(t); });
}

WarpingFunction exp_t() {
  return WarpingFunction(
      "exp", IntervalDomain::real(), [](double t) { return std::exp(t); },
      [](double t) { return std::exp(t); },
      [](double t) { return std::exp(t); });
}

WarpingFunction sqrt1p_cosh4() {
  // f = sqrt(g), g = 1 + cosh^4
  auto g = [](double x) {
    const double c = std::cosh(x);
    return 1.0 + c * c * c * c;
  };
  auto g1 = [](double x) {
    const double c = std::cosh(x);
    return 4.0 * c * c * c * std::sinh(x);
  };
  auto g2 = [](double x) {
    const double c = std::cosh(x), s = std::sinh(x);
    return 4.0 * c * c * (3.0 * s * s + c * c);
  };
  return WarpingFunction(
      "sqrt1pcosh4", IntervalDomain::real(),
      [g](double x) { return std::sqrt(g(x)); },
      [g, g1](double x) { return g1(x) / (2.0 * std::sqrt(g(x))); },
      [g, g1, g2](double x) {
        const double gv = g(x), d1 = g1(x), d2 = g2(x);
        const double r = std::sqrt(gv);
        return d2 / (2.0 * r) - d1 * d1 / (4.0 * gv * r);
      });
}

WarpingFunction quartic_rational() {
  // h = sqrt(p)/q, p = 2x^4 + 6x^2 + 5, q = x^2 + 2
  auto parts = [](double x, double& p, double& p1, double& p2, double& q,
                  double& q1) {
    const double x2 = x * x;
    p = 2.0 * x2 * x2 + 6.0 * x2 + 5.0;
    p1 = 8.0 * x2 * x + 12.0 * x;
    p2 = 24.0 * x2 + 12.0;
    q = x2 + 2.0;
    q1 = 2.0 * x;
  };
  return WarpingFunction(
      "quartic_rational", IntervalDomain::real(),
      [parts](double x) {
        double p, p1, p2, q, q1;
        parts(x, p, p1, p2, q, q1);
        return std::sqrt(p) / q;
      },
      [parts](double x) {
        double p, p1, p2, q, q1;
        parts(x, p, p1, p2, q, q1);
        const double r = std::sqrt(p);
        return p1 / (2.0 * r * q) - r * q1 / (q * q);
      },
      [parts](double x) {
        double p, p1, p2, q, q1;
        parts(x, p, p1, p2, q, q1);
        const double r = std::sqrt(p);
        const double r1 = p1 / (2.0 * r);
        const double r2 = (2.0 * p * p2 - p1 * p1) / (4.0 * p * r);
        // (r/q)'' with q'' = 2
        return r2 / q - 2.0 * r1 * q1 / (q * q) - r * 2.0 / (q * q) +
               2.0 * r * q1 * q1 / (q * q * q);
      });
}

WarpingFunction by_name(const std::string& name,
                        std::optional<IntervalDomain> domain) {
  WarpingFunction f = [&]() -> WarpingFunction {
    if (name == "constant") return constant();
    if (name == "cosh") return cosh_t();
    if (name == "exp") return exp_t();
    if (name == "sqrt1pcosh4") return sqrt1p_cosh4();
    if (name == "quartic_rational") return quartic_rational();
    throw Error("unknown warping preset '" + name + "'");
  }();
  if (domain) return f.restricted(*domain);
  return f;
}

std::vector<std::string> names() {
  return {"constant", "cosh", "exp", "sqrt1pcosh4", "quartic_rational"};
}

}  // namespace presets

// ---------------------------------------------------------------------------
// Tabulated warping: natural cubic spline

namespace {

struct Spline {
  std::vector<double> t, y, m;  // m = second derivatives at knots

  int interval(double x) const {
    int lo = 0, hi = static_cast<int>(t.size()) - 2;
    while (lo < hi) {
      const int mid = (lo + hi + 1) / 2;
      if (t[mid] <= x) lo = mid;
      else hi = mid - 1;
    }
    return lo;
  }

  double eval(double x, int d) const {
    const int i = interval(x);
    const double h = t[i + 1] - t[i];
    const double a = (t[i + 1] - x) / h;
    const double b = (x - t[i]) / h;
    switch (d) {
      case 0:
        return a * y[i] + b * y[i + 1] +
               ((a * a * a - a) * m[i] + (b * b * b - b) * m[i + 1]) *
                   (h * h) / 6.0;
      case 1:
        return (y[i + 1] - y[i]) / h +
               h / 6.0 *
                   ((3.0 * b * b - 1.0) * m[i + 1] - (3.0 * a * a - 1.0) * m[i]);
      default:
        return a * m[i] + b * m[i + 1];
    }
  }
};

Spline build_spline(std::vector<double> ts, std::vector<double> fs) {
  const std::size_t n = ts.size();
  if (n < 4 || fs.size() != n) {
    throw Error("tabulated warping needs >= 4 samples with matching columns");
  }
  for (std::size_t i = 1; i < n; ++i) {
    if (!(ts[i] > ts[i - 1])) throw Error("table abscissae must increase");
  }
  // Natural spline: tridiagonal solve for second derivatives.
  std::vector<double> a(n, 0.0), b(n, 0.0), c(n, 0.0), d(n, 0.0);
  b[0] = b[n - 1] = 1.0;
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double hl = ts[i] - ts[i - 1];
    const double hr = ts[i + 1] - ts[i];
    a[i] = hl / 6.0;
    b[i] = (hl + hr) / 3.0;
    c[i] = hr / 6.0;
    d[i] = (fs[i + 1] - fs[i]) / hr - (fs[i] - fs[i - 1]) / hl;
  }
  // Thomas algorithm
  for (std::size_t i = 1; i < n; ++i) {
    const double w = a[i] / b[i - 1];
    b[i] -= w * c[i - 1];
    d[i] -= w * d[i - 1];
  }
  std::vector<double> m(n);
  m[n - 1] = d[n - 1] / b[n - 1];
  for (std::size_t i = n - 1; i-- > 0;) {
    m[i] = (d[i] - c[i] * m[i + 1]) / b[i];
  }
  return Spline{std::move(ts), std::move(fs), std::move(m)};
}

}  // namespace

WarpingFunction tabulated_warping(std::vector<double> ts,
                                  std::vector<double> fs) {
  for (double v : fs) {
    if (!(v > 0.0)) throw Error("tabulated warping values must be positive");
  }
  auto sp = std::make_shared<Spline>(build_spline(std::move(ts), std::move(fs)));
  IntervalDomain dom{sp->t.front(), sp->t.back()};
  return WarpingFunction(
      "table", dom, [sp](double x) { return sp->eval(x, 0); },
      [sp](double x) { return sp->eval(x, 1); },
      [sp](double x) { return sp->eval(x, 2); });
}

// ---------------------------------------------------------------------------
// Classification

std::string to_string(Monotonicity m) {
  switch (m) {
    case Monotonicity::NonIncreasing: return "non-increasing";
    case Monotonicity::NonDecreasing: return "non-decreasing";
    case Monotonicity::NonMonotone: return "non-monotone";
    case Monotonicity::Constant: return "constant";
  }
  return "?";
}

std::pair<double, double> sample_box(const WarpingFunction& f,
                                     const SampleConfig& cfg) {
  if (cfg.box) return *cfg.box;
  const IntervalDomain& d = f.domain();
  double lo = std::max(d.lower, -cfg.box_halfwidth);
  double hi = std::min(d.upper, cfg.box_halfwidth);
  // inset strictly inside open finite endpoints
  const double inset = (hi - lo) * 1e-9;
  if (d.finite_lower() && lo == d.lower) lo += inset;
  if (d.finite_upper() && hi == d.upper) hi -= inset;
  if (!(lo < hi)) throw Error("degenerate sample box");
  return {lo, hi};
}

EndpointIntegral endpoint_integral(const WarpingFunction& f, Side side,
                                   const ImproperConfig& cfg,
                                   std::optional<double> c) {
  SampleConfig sc;
  sc.improper = cfg;
  const auto [lo, hi] = sample_box(f, sc);
  const double anchor = c ? *c : 0.5 * (lo + hi);
  if (!f.domain().contains(anchor)) {
    throw DomainError("endpoint integral anchor outside warping domain");
  }
  const double endpoint =
      (side == Side::Lower) ? f.domain().lower : f.domain().upper;
  const ImproperResult r = improper_integral(
      [&f](double t) { return f.value(t); }, anchor, endpoint, cfg);
  // Integral is oriented: side a is int_a^c, side b is int_c^b; both are the
  // magnitude of the window sums computed toward the endpoint.
  return {r.verdict, std::abs(r.value), r.error_estimate};
}

WarpClassification classify_warping(const WarpingFunction& f,
                                    const SampleConfig& cfg) {
  WarpClassification out;
  const auto [lo, hi] = sample_box(f, cfg);
  const int n = std::max(cfg.samples, 2);
  const double h = (hi - lo) / (n - 1);

  std::vector<double> ts(n), fv(n), d1(n), ld2(n);
  for (int i = 0; i < n; ++i) {
    const double t = lo + i * h;
    ts[i] = t;
    fv[i] = f.value(t);
    d1[i] = f.deriv(t);
    ld2[i] = f.log_deriv2(t);
    if (!(fv[i] > 0.0) || !std::isfinite(fv[i])) {
      std::ostringstream os;
      os << "invalid warping: f(" << t << ") = " << fv[i] << " is not positive";
      throw Error(os.str());
    }
  }

  out.positive = true;
  out.inf_f = *std::min_element(fv.begin(), fv.end());
  out.sup_f = *std::max_element(fv.begin(), fv.end());

  const double scale = std::max(1.0, out.sup_f);
  const double tol = cfg.tol * scale;
  const bool any_up = std::any_of(d1.begin(), d1.end(),
                                  [tol](double v) { return v > tol; });
  const bool any_down = std::any_of(d1.begin(), d1.end(),
                                    [tol](double v) { return v < -tol; });
  if (!any_up && !any_down) out.monotone = Monotonicity::Constant;
  else if (!any_down) out.monotone = Monotonicity::NonDecreasing;
  else if (!any_up) out.monotone = Monotonicity::NonIncreasing;
  else out.monotone = Monotonicity::NonMonotone;

  out.log_convex = std::all_of(ld2.begin(), ld2.end(),
                               [&](double v) { return v >= -cfg.tol; });

  // Non-locally-constant proxy: no window of length >= delta on which
  // max |f'| < eps.
  const double delta = (hi - lo) * cfg.flat_window_fraction;
  const int win = std::max(2, static_cast<int>(std::ceil(delta / h)));
  bool flat_window = false;
  int run = 0;
  for (int i = 0; i < n; ++i) {
    run = (std::abs(d1[i]) < cfg.flat_eps) ? run + 1 : 0;
    if (run >= win) {
      flat_window = true;
      break;
    }
  }
  out.non_locally_constant = !flat_window;

  // Isolated zeros of f' by bisection on sign changes. A constant function
  // has no isolated zeros to report.
  if (out.monotone != Monotonicity::Constant) {
    for (int i = 0; i + 1 < n; ++i) {
      double a = ts[i], b = ts[i + 1];
      double fa = d1[i], fb = d1[i + 1];
      if (fa == 0.0) {
        // count an exact sample zero once, only if the sign flips around it
        if (i > 0 && d1[i - 1] * fb < 0.0) out.zeros_of_d1.push_back(a);
        continue;
      }
      if (fa * fb < 0.0) {
        for (int it = 0; it < 80; ++it) {
          const double m = 0.5 * (a + b);
          const double fm = f.deriv(m);
          if (fa * fm <= 0.0) {
            b = m;
            fb = fm;
          } else {
            a = m;
            fa = fm;
          }
        }
        out.zeros_of_d1.push_back(0.5 * (a + b));
      }
    }
  }

  out.l1_at_a = endpoint_integral(f, Side::Lower, cfg.improper);
  out.l1_at_b = endpoint_integral(f, Side::Upper, cfg.improper);
  return out;
}

}  // namespace warpgraph
