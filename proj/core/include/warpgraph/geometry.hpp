#pragma once

#include <Eigen/Dense>
#include <functional>
#include <string>
#include <vector>

#include "warpgraph/grid.hpp"
#include "warpgraph/operators.hpp"
#include "warpgraph/warp.hpp"

namespace warpgraph {

/// Per-node extrinsic geometry of the graph of u in I x_f M, with respect to
/// the unit normal that has positive dt-component:
///   W = sqrt(f(u)^2 + |Du|^2),  cos(theta) = f(u)/W = <N, dt>,
///   shape operator A (chart matrix), H = trace(A)/n.
/// Immutable after assembly; all evaluators below are pure.
struct GraphState {
  FiberGrid grid;
  WarpingFunction warp;
  ScalarField u;
  VectorField du;           // chart partials of u
  ScalarField w;            // W
  ScalarField cos_theta;    // dt-component of N
  VectorField normal_fiber; // fiber part of N: -cos(theta) g^{kk} d_k u / f^2
  std::vector<double> shape;  // dim^2 entries per node, row-major
  ScalarField mean_curvature;

  GraphState(const FiberGrid& g, const WarpingFunction& f)
      : grid(g), warp(f), u(g), du(g), w(g), cos_theta(g), normal_fiber(g),
        shape(g.node_count() * g.dim() * g.dim(), 0.0), mean_curvature(g) {}

  int dim() const { return grid.dim(); }
  double normal_t(std::size_t id) const { return cos_theta[id]; }
  Eigen::Matrix2d shape_at(std::size_t id) const;
  /// |H| sup norm, the minimality defect.
  double minimality_defect() const { return mean_curvature.max_abs(); }
};

/// Build the state. Throws DomainError (naming nodes) if u leaves the domain
/// of f. The shape operator uses analytic f-derivatives and the discrete
/// Hessian of u; the sign is anchored by A = -(f'(t0)/f(t0)) Id on slices.
GraphState assemble_state(const FiberGrid& grid, const WarpingFunction& f,
                          const ScalarField& u);

/// Divergence-form MS residual
///   R(u) = div(Du / (f(u) W)) - (f'(u)/W) (n - |Du|^2/f(u)^2)
/// in its variational discretization: R = -(dV/du)/(w f^n), so R vanishes
/// exactly where the discrete volume is critical. Slices give
/// R = -n f'(t0)/f(t0).
ScalarField ms_residual(const FiberGrid& grid, const WarpingFunction& f,
                        const ScalarField& u);

// ---------------------------------------------------------------------------
// Laplacian identities

enum class IdentityKind {
  DTau,      // graph Laplacian of tau
  DFTau,     // graph Laplacian of f(tau)
  ConfTau,   // conformal Laplacian of tau
  ConfFTau,  // conformal Laplacian of f(tau)
  Arccot,    // conformal Laplacian of arccot f(tau)
  FLower,    // conformal Laplacian of int_{s0}^{tau} f
  FUpper,    // conformal Laplacian of int_{tau}^{s^0} f
  LCos,      // graph Laplacian of cos(theta), f == 1, flat fiber
};

IdentityKind identity_from_string(const std::string& name);
std::string to_string(IdentityKind which);

struct FormulaOptions {
  /// Strict mode evaluates the minimal-hypersurface forms and rejects states
  /// with |H| above `minimal_tol`. Non-strict keeps the nH completion terms,
  /// which makes the identities exact for arbitrary graphs.
  bool assume_minimal = true;
  double minimal_tol = 1e-8;
};

/// Evaluate the right-hand side of the chosen identity pointwise from the
/// state. Throws HypothesisError (reporting |H|inf) when a strict-mode
/// precondition fails, and for LCos when f is not constant.
ScalarField formula_laplacian(IdentityKind which, const GraphState& state,
                              const FormulaOptions& opts = {});

/// The arccot expansion as displayed in the source derivation (minimal
/// form). Kept as a diagnostic: it disagrees with the chain-rule expansion
/// through the conformal Laplacian of f(tau) by
/// 2 f'^2 Q (1-f^2) / (f^3 (1+f^2)^2).
ScalarField arccot_display_variant(const GraphState& state);

struct IdentityReport {
  IdentityKind which;
  std::vector<int> levels;           // nodes per axis
  std::vector<double> max_abs_gap;   // per level
  std::vector<double> observed_order;  // between consecutive levels
  double order_overall = 0.0;  // ladder slope, log2(gap_first/gap_last)/(L-1)
  bool exact = false;  // every gap at round-off floor
  bool pass = false;   // exact, or gaps decreasing with overall order >= threshold
  double order_threshold = 1.9;
  double display_variant_gap = 0.0;  // Arccot only
};

/// Compare the discrete Laplace-Beltrami of the identity's witness field
/// against formula_laplacian over a grid-refinement ladder; u is sampled
/// from u_fn per level.
IdentityReport identity_report(IdentityKind which, const WarpingFunction& f,
                               const std::function<double(double, double)>& u_fn,
                               const std::vector<FiberGrid>& levels,
                               double order_threshold = 1.9);

// ---------------------------------------------------------------------------
// Witness fields

enum class WitnessKind { ArccotFTau, FLower, FUpper, CosTheta, SechSq };

WitnessKind witness_from_string(const std::string& name);
std::string to_string(WitnessKind kind);

/// The positive function whose super/subharmonicity the theorems exploit.
/// FLower/FUpper integrate f by quadrature from s0 = min u (resp. to
/// s^0 = max u); ArccotFTau takes values in (0, pi/2); SechSq is the 1-D
/// demo field 1/cosh^2(x) over the first grid coordinate.
ScalarField witness_field(WitnessKind kind, const GraphState& state);

}  // namespace warpgraph
