#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "warpgraph/geometry.hpp"
#include "warpgraph/grid.hpp"
#include "warpgraph/operators.hpp"
#include "warpgraph/warp.hpp"

namespace warpgraph {

/// Smallest c with |Du| <= c f(u): max over nodes of |Du|_g / f(u).
double gradient_bound_constant(const FiberGrid& grid, const WarpingFunction& f,
                               const ScalarField& u);

/// Eigenvalue range of ghat = g_u/f(u)^2 relative to the fiber metric. For a
/// graph with gradient bound c the range is [1, 1 + c^2]; pass certifies the
/// quasi-isometry of the conformal metric onto the fiber.
struct QuasiIsometryCheck {
  double lambda_min = 0.0;
  double lambda_max = 0.0;
  double qi_constant = 0.0;  // max(l_max, 1/l_min)^(1/2)
  double gradient_bound_c = 0.0;
  bool pass = false;
};

QuasiIsometryCheck quasi_isometry_check(const FiberGrid& grid,
                                        const WarpingFunction& f,
                                        const ScalarField& u,
                                        double tol = 1e-10);

/// Eigenvalue sandwich for the conformally scaled product g_1 + h^2 g_2
/// against g_1 + g_2: the pointwise range {1, h^2} must land inside
/// [min(1, inf(h)^2), 1 + sup(h)^2].
struct ConformalSandwich {
  double lambda_lo = 0.0;
  double lambda_hi = 0.0;
  double inf_h = 0.0;
  double sup_h = 0.0;
  bool pass = false;
};

ConformalSandwich conformal_product_bounds(const WarpingFunction& h, double lo,
                                           double hi, int samples = 4001);

/// Discrete Laplacian scan of a witness field in the chosen metric.
/// Conformal scans require the state to be minimal to `minimal_tol`
/// (HypothesisError otherwise).
struct SuperharmonicScan {
  double max_laplacian = 0.0;
  double fraction_nonpositive = 0.0;  // nodes with Delta <= tol
  double tol = 0.0;
  std::size_t nodes = 0;
};

SuperharmonicScan superharmonic_scan(const GraphState& state, WitnessKind kind,
                                     MetricTag metric, double tol = 1e-10,
                                     double minimal_tol = 1e-6);

/// Scan of 1/cosh^2 x on the warped plane dx^2 + h(x)^2 dy^2: analytic
/// Laplacian, its match against the displayed rational expression (for
/// h = sqrt(1 + cosh^4)), and the discrete cross-check on a line grid.
/// The display's claimed sign is wrong (the displayed value is positive and
/// equals Delta of MINUS the witness); the flag records that.
struct WitnessReport {
  double max_analytic_laplacian = 0.0;   // over samples; expected < 0
  double max_display_gap = 0.0;          // |(-Delta sech^2) - displayed|
  double max_discrete_laplacian = 0.0;   // interior nodes of the line grid
  bool sign_discrepancy_flagged = true;
  int samples = 0;
};

WitnessReport nonparabolicity_witness_report(const WarpingFunction& plane_warp,
                                             double lo, double hi,
                                             int samples = 2001,
                                             int grid_nodes = 4001);

// ---------------------------------------------------------------------------
// Theorem hypothesis checking

struct HypothesisReport {
  double gradient_bound_c = 0.0;
  double angle_gap = 0.0;  // min cos(theta)
  WarpClassification warping;
  std::vector<std::string> applicable_theorems;
  std::string predicted_conclusion;  // "constant" | "totally_geodesic" | "none"
  std::vector<std::string> notes;
};

HypothesisReport hypothesis_report(const FiberGrid& grid,
                                   const WarpingFunction& f,
                                   const ScalarField& u,
                                   const SampleConfig& cfg = {});

// ---------------------------------------------------------------------------
// Quadratic area growth (product ambient, 2-D box)

struct AreaGrowth {
  std::array<double, 3> center{};  // ambient point (u, x, y)
  std::vector<double> radii;
  std::vector<double> areas;
  std::vector<bool> truncated;  // ball not fully covered by the grid box
};

/// Area of the graph inside ambient balls around a graph point; cells are
/// counted by their node's graph position. Requires a 2-D bounded box and a
/// constant warping == 1.
AreaGrowth ball_area_growth(const GraphState& state,
                            const std::vector<double>& radii,
                            std::optional<std::array<double, 2>> center_xy = {});

}  // namespace warpgraph
