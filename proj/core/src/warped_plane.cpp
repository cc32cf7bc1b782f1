#include "warpgraph/warped_plane.hpp"

#include <algorithm>
#include <cmath>

#include "warpgraph/errors.hpp"

namespace warpgraph {

namespace curves {

PlaneCurve constant(double v) {
  return {[v](double) { return v; }, [](double) { return 0.0; },
          [](double) { return 0.0; }};
}

PlaneCurve tanh_x() {
  return {[](double x) { return std::tanh(x); },
          [](double x) {
            const double c = std::cosh(x);
            return 1.0 / (c * c);
          },
          [](double x) {
            const double c = std::cosh(x);
            return -2.0 * std::tanh(x) / (c * c);
          }};
}

PlaneCurve x_plus_arctan() {
  return {[](double x) { return x + std::atan(x); },
          [](double x) { return (x * x + 2.0) / (x * x + 1.0); },
          [](double x) {
            const double d = x * x + 1.0;
            return -2.0 * x / (d * d);
          }};
}

PlaneCurve sech_sq() {
  return {[](double x) {
            const double c = std::cosh(x);
            return 1.0 / (c * c);
          },
          [](double x) {
            const double c = std::cosh(x);
            return -2.0 * std::tanh(x) / (c * c);
          },
          [](double x) {
            const double c = std::cosh(x);
            const double t = std::tanh(x);
            // d/dx(-2 sech^2 tanh) = 4 sech^2 tanh^2 - 2 sech^4
            return 4.0 * t * t / (c * c) - 2.0 / (c * c * c * c);
          }};
}

}  // namespace curves

std::vector<double> uniform_samples(double lo, double hi, int count) {
  std::vector<double> xs(count);
  for (int i = 0; i < count; ++i) {
    xs[i] = lo + (hi - lo) * i / (count - 1);
  }
  return xs;
}

FirstIntegralScan first_integral(const WarpingFunction& h, const PlaneCurve& u,
                                 const std::vector<double>& xs) {
  FirstIntegralScan scan;
  scan.xs = xs;
  scan.c_values.reserve(xs.size());
  for (double x : xs) {
    const double up = u.deriv(x);
    scan.c_values.push_back(h.value(x) * up / std::sqrt(1.0 + up * up));
  }
  std::vector<double> sorted = scan.c_values;
  std::nth_element(sorted.begin(), sorted.begin() + sorted.size() / 2,
                   sorted.end());
  scan.median_c = sorted[sorted.size() / 2];
  for (double c : scan.c_values) {
    scan.max_deviation = std::max(scan.max_deviation,
                                  std::abs(c - scan.median_c));
  }
  return scan;
}

OdeSolution ode_solve(const WarpingFunction& h, double c_value, double x0,
                      double u0, double lo, double hi, int steps_per_unit) {
  if (!(lo <= x0 && x0 <= hi)) throw Error("x0 must lie inside the span");
  OdeSolution sol;
  sol.reach_lo = x0;
  sol.reach_hi = x0;

  auto slope = [&](double x, bool& ok) {
    const double hv = h.value(x);
    const double gap = hv * hv - c_value * c_value;
    ok = gap > 0.0;
    return ok ? c_value / std::sqrt(gap) : 0.0;
  };

  auto march = [&](double from, double to, std::vector<double>& xs,
                   std::vector<double>& us) {
    const int steps =
        std::max(1, static_cast<int>(std::ceil(std::abs(to - from) *
                                               steps_per_unit)));
    const double dx = (to - from) / steps;
    double x = from, u = u0;
    xs.push_back(x);
    us.push_back(u);
    for (int i = 0; i < steps; ++i) {
      bool ok1 = false, ok2 = false, ok3 = false, ok4 = false;
      const double k1 = slope(x, ok1);
      const double k2 = slope(x + 0.5 * dx, ok2);
      const double k3 = slope(x + 0.5 * dx, ok3);
      const double k4 = slope(x + dx, ok4);
      if (!(ok1 && ok2 && ok3 && ok4)) {
        sol.hit_singularity = true;
        return x;
      }
      u += dx / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
      x = from + (i + 1) * dx;
      xs.push_back(x);
      us.push_back(u);
    }
    return x;
  };

  std::vector<double> xs_up, us_up, xs_down, us_down;
  sol.reach_hi = march(x0, hi, xs_up, us_up);
  sol.reach_lo = march(x0, lo, xs_down, us_down);

  // stitch: descending branch reversed, then ascending branch
  sol.xs.assign(xs_down.rbegin(), xs_down.rend());
  sol.us.assign(us_down.rbegin(), us_down.rend());
  sol.xs.insert(sol.xs.end(), xs_up.begin() + 1, xs_up.end());
  sol.us.insert(sol.us.end(), us_up.begin() + 1, us_up.end());
  return sol;
}

double plane_laplacian(const WarpingFunction& h, const PlaneCurve& phi,
                       double x) {
  return phi.deriv2(x) + (h.deriv(x) / h.value(x)) * phi.deriv(x);
}

double plane_residual(const WarpingFunction& h, const PlaneCurve& u,
                      double x) {
  const double up = u.deriv(x);
  const double upp = u.deriv2(x);
  const double s = std::sqrt(1.0 + up * up);
  return h.deriv(x) * up / (h.value(x) * s) + upp / (s * s * s);
}

double displayed_witness_laplacian(double x) {
  const double c2 = std::cosh(x) * std::cosh(x);
  const double c4 = c2 * c2;
  return 2.0 * ((c2 - 1.0) * (c2 - 1.0) + 2.0) / (c4 * (1.0 + c4));
}

ScalarField warped_plane_laplacian(const FiberGrid& line,
                                   const WarpingFunction& h,
                                   const ScalarField& phi) {
  if (line.dim() != 1) throw Error("warped_plane_laplacian needs a 1-D grid");
  ScalarField out(line);
  const double dx = line.spacing(0);
  for (std::size_t id = 0; id < line.node_count(); ++id) {
    bool okm = false, okp = false;
    const std::size_t m1 = line.neighbor(id, 0, -1, okm);
    const std::size_t p1 = line.neighbor(id, 0, +1, okp);
    if (!okm || !okp) {
      out[id] = 0.0;  // boundary rows are not part of the scan
      continue;
    }
    const double x = line.position(id)[0];
    const double wl = h.value(x - 0.5 * dx);
    const double wr = h.value(x + 0.5 * dx);
    out[id] = (wr * (phi[p1] - phi[id]) - wl * (phi[id] - phi[m1])) /
              (h.value(x) * dx * dx);
  }
  return out;
}

}  // namespace warpgraph
