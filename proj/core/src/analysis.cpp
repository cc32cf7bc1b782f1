#include "warpgraph/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "warpgraph/errors.hpp"
#include "warpgraph/variational.hpp"
#include "warpgraph/warped_plane.hpp"

namespace warpgraph {

double gradient_bound_constant(const FiberGrid& grid, const WarpingFunction& f,
                               const ScalarField& u) {
  const VectorField du = gradient(u);
  double c = 0.0;
  for (std::size_t id = 0; id < grid.node_count(); ++id) {
    double sq = 0.0;
    for (int i = 0; i < grid.dim(); ++i) {
      sq += du.at(i, id) * du.at(i, id) / grid.metric_diag(i);
    }
    c = std::max(c, std::sqrt(sq) / f.value(u[id]));
  }
  return c;
}

QuasiIsometryCheck quasi_isometry_check(const FiberGrid& grid,
                                        const WarpingFunction& f,
                                        const ScalarField& u, double tol) {
  QuasiIsometryCheck out;
  const auto [lo, hi] = metric_eigen_bounds(grid, MetricKind::conformal(u, f),
                                            MetricKind::fiber());
  out.lambda_min = lo;
  out.lambda_max = hi;
  out.qi_constant = std::sqrt(std::max(hi, 1.0 / lo));
  out.gradient_bound_c = gradient_bound_constant(grid, f, u);
  const double cap = 1.0 + out.gradient_bound_c * out.gradient_bound_c;
  out.pass = (lo >= 1.0 - tol) && (hi <= cap + tol);
  return out;
}

ConformalSandwich conformal_product_bounds(const WarpingFunction& h, double lo,
                                           double hi, int samples) {
  ConformalSandwich out;
  out.inf_h = std::numeric_limits<double>::infinity();
  out.sup_h = 0.0;
  out.lambda_lo = std::numeric_limits<double>::infinity();
  out.lambda_hi = 0.0;
  for (int i = 0; i < samples; ++i) {
    const double x = lo + (hi - lo) * i / (samples - 1);
    const double v = h.value(x);
    out.inf_h = std::min(out.inf_h, v);
    out.sup_h = std::max(out.sup_h, v);
    // generalized eigenvalues of diag(1, h^2) against the identity
    out.lambda_lo = std::min(out.lambda_lo, std::min(1.0, v * v));
    out.lambda_hi = std::max(out.lambda_hi, std::max(1.0, v * v));
  }
  const double lo_bound = std::min(1.0, out.inf_h * out.inf_h);
  const double hi_bound = 1.0 + out.sup_h * out.sup_h;
  out.pass = out.lambda_lo >= lo_bound - 1e-12 &&
             out.lambda_hi <= hi_bound + 1e-12;
  return out;
}

SuperharmonicScan superharmonic_scan(const GraphState& state, WitnessKind kind,
                                     MetricTag metric, double tol,
                                     double minimal_tol) {
  if (metric == MetricTag::ConformalGhat) {
    const double defect = state.minimality_defect();
    if (defect > minimal_tol) {
      throw HypothesisError(
          "conformal superharmonic scan requires a minimal state; |H|inf = " +
          std::to_string(defect));
    }
  }
  const ScalarField field = witness_field(kind, state);
  MetricKind mk = MetricKind::fiber();
  if (metric == MetricTag::GraphGu) mk = MetricKind::graph(state.u, state.warp);
  if (metric == MetricTag::ConformalGhat) {
    mk = MetricKind::conformal(state.u, state.warp);
  }
  const ScalarField lap = laplace_beltrami(mk, field);

  SuperharmonicScan scan;
  scan.tol = tol;
  scan.nodes = state.grid.node_count();
  scan.max_laplacian = -std::numeric_limits<double>::infinity();
  std::size_t ok = 0;
  for (std::size_t id = 0; id < scan.nodes; ++id) {
    scan.max_laplacian = std::max(scan.max_laplacian, lap[id]);
    if (lap[id] <= tol) ++ok;
  }
  scan.fraction_nonpositive = static_cast<double>(ok) /
                              static_cast<double>(scan.nodes);
  return scan;
}

WitnessReport nonparabolicity_witness_report(const WarpingFunction& plane_warp,
                                             double lo, double hi, int samples,
                                             int grid_nodes) {
  WitnessReport rep;
  rep.samples = samples;
  rep.max_analytic_laplacian = -std::numeric_limits<double>::infinity();
  const PlaneCurve witness = curves::sech_sq();
  for (int i = 0; i < samples; ++i) {
    const double x = lo + (hi - lo) * i / (samples - 1);
    const double lap = plane_laplacian(plane_warp, witness, x);
    rep.max_analytic_laplacian = std::max(rep.max_analytic_laplacian, lap);
    rep.max_display_gap = std::max(
        rep.max_display_gap, std::abs(-lap - displayed_witness_laplacian(x)));
  }

  // discrete cross-check on a line grid
  const FiberGrid line = FiberGrid::box({GridAxis{lo, hi - lo, grid_nodes}});
  ScalarField phi = ScalarField::sample(
      line, [&](double x, double) { return witness.value(x); });
  const ScalarField lap = warped_plane_laplacian(line, plane_warp, phi);
  rep.max_discrete_laplacian = -std::numeric_limits<double>::infinity();
  for (std::size_t id = 0; id < line.node_count(); ++id) {
    if (!line.interior(id)) continue;
    rep.max_discrete_laplacian = std::max(rep.max_discrete_laplacian, lap[id]);
  }
  rep.sign_discrepancy_flagged = true;
  return rep;
}

// ---------------------------------------------------------------------------

HypothesisReport hypothesis_report(const FiberGrid& grid,
                                   const WarpingFunction& f,
                                   const ScalarField& u,
                                   const SampleConfig& cfg) {
  check_in_domain(grid, f, u);
  HypothesisReport rep;
  rep.gradient_bound_c = gradient_bound_constant(grid, f, u);
  rep.warping = classify_warping(f, cfg);

  double min_cos = std::numeric_limits<double>::infinity();
  const VectorField du = gradient(u);
  for (std::size_t id = 0; id < grid.node_count(); ++id) {
    double sq = 0.0;
    for (int i = 0; i < grid.dim(); ++i) {
      sq += du.at(i, id) * du.at(i, id) / grid.metric_diag(i);
    }
    const double fv = f.value(u[id]);
    min_cos = std::min(min_cos, fv / std::sqrt(fv * fv + sq));
  }
  rep.angle_gap = min_cos;

  const WarpClassification& wc = rep.warping;
  const bool monotone = wc.monotone != Monotonicity::NonMonotone;
  const bool non_increasing = wc.monotone == Monotonicity::NonIncreasing ||
                              wc.monotone == Monotonicity::Constant;
  const bool non_decreasing = wc.monotone == Monotonicity::NonDecreasing ||
                              wc.monotone == Monotonicity::Constant;
  const bool constant_warp = wc.monotone == Monotonicity::Constant;

  bool predicts_constant = false;
  auto add = [&](const std::string& tag, bool constant_conclusion) {
    rep.applicable_theorems.push_back(tag);
    predicts_constant = predicts_constant || constant_conclusion;
  };

  if (wc.positive && wc.non_locally_constant && wc.log_convex) {
    add("propio", true);
  }
  if (wc.positive && wc.log_convex) {
    // boundedness below/above of u is vacuous on a finite grid
    add("nopropio", true);
  }
  if (wc.positive && f.domain().finite_lower() && non_increasing &&
      wc.l1_at_a.finite()) {
    add("signada1_i", true);
  }
  if (wc.positive && f.domain().finite_upper() && non_decreasing &&
      wc.l1_at_b.finite()) {
    add("signada1_ii", true);
  }
  if (wc.positive && (non_increasing || non_decreasing)) {
    add("signada2", true);
  }
  if (wc.positive && monotone) {
    add("signada2consecuencia", true);
  }
  if (constant_warp) {
    add("tgeodesic", false);
    add("product_moser", true);
  }

  if (predicts_constant) {
    rep.predicted_conclusion = "constant";
  } else if (constant_warp) {
    rep.predicted_conclusion = "totally_geodesic";
  } else {
    rep.predicted_conclusion = "none";
  }

  rep.notes.push_back(
      "compact_surrogate: the grid stands in for a non-compact parabolic "
      "fiber; hypotheses are checked on numeric proxies");
  rep.notes.push_back(
      "boundedness hypotheses (u bounded below/above) are vacuously true on "
      "a finite grid");
  if (constant_warp) {
    rep.notes.push_back(
        "tgeodesic strict case (Ricci negative definite at a point) is not "
        "checkable on flat fibers; Ric == 0 counts as non-positive only");
  }
  return rep;
}

AreaGrowth ball_area_growth(const GraphState& state,
                            const std::vector<double>& radii,
                            std::optional<std::array<double, 2>> center_xy) {
  const FiberGrid& grid = state.grid;
  if (grid.dim() != 2 || grid.topology() != Topology::Bounded) {
    throw HypothesisError("area growth needs a 2-D bounded box");
  }
  {
    // product ambient only: f == 1 on a neighborhood of the range of u
    const double lo = state.u.min() - 1.0, hi = state.u.max() + 1.0;
    for (int i = 0; i <= 32; ++i) {
      const double t = lo + (hi - lo) * i / 32.0;
      if (!state.warp.domain().contains(t)) continue;
      if (std::abs(state.warp.value(t) - 1.0) > 1e-12 ||
          std::abs(state.warp.deriv(t)) > 1e-12) {
        throw HypothesisError("area growth is stated for the product case f == 1");
      }
    }
  }

  AreaGrowth out;
  double cx, cy;
  if (center_xy) {
    cx = (*center_xy)[0];
    cy = (*center_xy)[1];
  } else {
    cx = grid.origin(0) + 0.5 * grid.extent(0);
    cy = grid.origin(1) + 0.5 * grid.extent(1);
  }
  // center height: sample u at the nearest node
  const int ix = static_cast<int>(std::lround((cx - grid.origin(0)) / grid.spacing(0)));
  const int iy = static_cast<int>(std::lround((cy - grid.origin(1)) / grid.spacing(1)));
  const std::size_t cid = grid.index(
      std::clamp(ix, 0, grid.count(0) - 1), std::clamp(iy, 0, grid.count(1) - 1));
  const double cu = state.u[cid];
  out.center = {cu, cx, cy};

  std::vector<double> sorted = radii;
  std::sort(sorted.begin(), sorted.end());
  for (double r : sorted) {
    double area = 0.0;
    for (std::size_t id = 0; id < grid.node_count(); ++id) {
      const auto p = grid.position(id);
      const double dx = p[0] - cx, dy = p[1] - cy, du = state.u[id] - cu;
      if (dx * dx + dy * dy + du * du <= r * r) {
        // graph area element W dmu_g (f == 1)
        area += grid.cell_weight(id) * state.w[id];
      }
    }
    const bool trunc = cx - r < grid.origin(0) ||
                       cx + r > grid.origin(0) + grid.extent(0) ||
                       cy - r < grid.origin(1) ||
                       cy + r > grid.origin(1) + grid.extent(1);
    out.radii.push_back(r);
    out.areas.push_back(area);
    out.truncated.push_back(trunc);
  }
  return out;
}

}  // namespace warpgraph
