#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "warpgraph/grid.hpp"
#include "warpgraph/warp.hpp"

namespace warpgraph {

enum class SolveMethod { NewtonDamped, Descent, FlowRelax };

SolveMethod method_from_string(const std::string& name);
std::string to_string(SolveMethod m);

struct SolverConfig {
  SolveMethod method = SolveMethod::NewtonDamped;
  double tol_residual = 1e-10;
  int max_iter = 50;           // steps for the flow method
  double damping = 1.0;        // initial line-search step in (0, 1]
  double backtrack = 0.5;      // step shrink factor
  double flow_dt_safety = 0.8; // fraction of the explicit stability cap
  std::uint64_t seed = 0;      // reproducible initial perturbations
  double domain_margin = 0.01; // fraction of (finite) domain span kept clear
};

struct SolverReport {
  std::string method;
  int iterations = 0;
  std::vector<double> residual_history;  // sup norms, one per iterate
  bool converged = false;
  double mean = 0.0;
  double stddev = 0.0;
  double min = 0.0;
  double max = 0.0;
  double wall_time_ms = 0.0;
  std::string message;
};

/// Discrete graph volume: sum of f(u)^(n-1) sqrt(f(u)^2 + |Du|^2) against
/// the fiber cell measure.
double volume(const FiberGrid& grid, const WarpingFunction& f,
              const ScalarField& u);

/// Exact gradient dV/du_k of the discrete volume; vanishes exactly where
/// ms_residual vanishes.
ScalarField volume_gradient(const FiberGrid& grid, const WarpingFunction& f,
                            const ScalarField& u);

/// Solve the MS equation from u0. Newton uses the exact sparse Jacobian of
/// the discrete residual (with a mean-pinned bordered system when the
/// warping is constant); descent backtracks on the volume. Non-convergence
/// is a report, not an exception. Dirichlet boxes hold the boundary values
/// of u0 fixed.
std::pair<ScalarField, SolverReport> solve_minimal(const FiberGrid& grid,
                                                   const WarpingFunction& f,
                                                   const ScalarField& u0,
                                                   const SolverConfig& cfg);

/// Explicit relaxation u <- u + dt (W/n) R(u) under a stability-capped dt.
struct FlowResult {
  std::vector<ScalarField> trajectory;  // snapshots, final state included
  SolverReport report;
};

FlowResult flow_relax(const FiberGrid& grid, const WarpingFunction& f,
                      const ScalarField& u0, const SolverConfig& cfg,
                      int snapshot_stride = 50);

// ---------------------------------------------------------------------------
// psi change of variable

/// v = psi(u) with psi(t) = int_{u_ref}^t ds/f(s); strictly increasing, so
/// invertible by bracketed bisection + Newton polish.
class PsiTransform {
 public:
  PsiTransform(const WarpingFunction& f, double u_ref);

  double u_ref() const { return u_ref_; }
  double forward(double t) const;
  /// Throws DomainError if v is outside the range of psi.
  double inverse(double v) const;
  ScalarField forward_field(const ScalarField& u) const;

 private:
  WarpingFunction f_;
  double u_ref_;
};

/// Residual of the transformed equation
///   div(Dv / sqrt(1+|Dv|^2)) - n f'(psi^{-1}(v)) / sqrt(1+|Dv|^2),
/// discretized with the same staggered machinery as ms_residual.
ScalarField transformed_residual(const FiberGrid& grid,
                                 const WarpingFunction& f,
                                 const ScalarField& v, const PsiTransform& psi);

/// phi(x) = x / sqrt(1 + x^2), the profile whose Laplacian form the
/// transformed equation takes. Strictly increasing, odd, |phi| < 1.
double phi_map(double x);

/// Deterministic smooth random field (low Fourier modes, max |.| == 1).
ScalarField seeded_fourier_field(const FiberGrid& grid, std::uint64_t seed,
                                 int max_mode = 2);

}  // namespace warpgraph
