#include "warpgraph/solver.hpp"

#include <Eigen/SparseCore>
#include <Eigen/SparseLU>
#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "warpgraph/errors.hpp"
#include "warpgraph/quadrature.hpp"
#include "warpgraph/variational.hpp"

namespace warpgraph {

SolveMethod method_from_string(const std::string& name) {
  if (name == "newton_damped" || name == "newton") return SolveMethod::NewtonDamped;
  if (name == "descent") return SolveMethod::Descent;
  if (name == "flow_relax" || name == "flow") return SolveMethod::FlowRelax;
  throw Error("unknown solver method '" + name + "'");
}

std::string to_string(SolveMethod m) {
  switch (m) {
    case SolveMethod::NewtonDamped: return "newton_damped";
    case SolveMethod::Descent: return "descent";
    case SolveMethod::FlowRelax: return "flow_relax";
  }
  return "?";
}

double volume(const FiberGrid& grid, const WarpingFunction& f,
              const ScalarField& u) {
  return discrete_volume(grid, f, u);
}

ScalarField volume_gradient(const FiberGrid& grid, const WarpingFunction& f,
                            const ScalarField& u) {
  return discrete_volume_gradient(grid, f, u);
}

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

void finish_report(SolverReport& rep, const ScalarField& u,
                   Clock::time_point t0) {
  rep.mean = u.mean();
  rep.stddev = u.stddev();
  rep.min = u.min();
  rep.max = u.max();
  rep.wall_time_ms = elapsed_ms(t0);
}

// Stay strictly inside the domain with a margin of `frac` of the span
// (finite endpoints only).
bool within_margin(const IntervalDomain& dom, double frac, const ScalarField& u) {
  double lo = dom.lower, hi = dom.upper;
  if (std::isfinite(lo) && std::isfinite(hi)) {
    const double margin = frac * (hi - lo);
    lo += margin;
    hi -= margin;
  }
  for (double v : u.values) {
    if (std::isfinite(lo) && v <= lo) return false;
    if (std::isfinite(hi) && v >= hi) return false;
  }
  return true;
}

double restricted_sup(const ScalarField& r, const FreeNodeMap& map) {
  double m = 0.0;
  for (std::size_t id : map.free_to_node) {
    const double a = std::abs(r[id]);
    if (!std::isfinite(a)) return std::numeric_limits<double>::infinity();
    m = std::max(m, a);
  }
  return m;
}

// 0.5 * sum r_k^2 over free nodes; the smooth merit the Newton line search
// descends (the exact Jacobian makes every Newton step a descent direction
// for it).
double l2_merit(const ScalarField& r, const FreeNodeMap& map) {
  double m = 0.0;
  for (std::size_t id : map.free_to_node) m += r[id] * r[id];
  return std::isfinite(m) ? 0.5 * m : std::numeric_limits<double>::infinity();
}

bool warping_is_constant(const WarpingFunction& f, const ScalarField& u) {
  const double lo = u.min(), hi = u.max();
  for (int i = 0; i <= 16; ++i) {
    const double t = lo + (hi - lo) * i / 16.0;
    if (std::abs(f.deriv(t)) > 1e-14 * std::max(1.0, f.value(t))) return false;
  }
  return true;
}

std::pair<ScalarField, SolverReport> newton_solve(const FiberGrid& grid,
                                                  const WarpingFunction& f,
                                                  const ScalarField& u0,
                                                  const SolverConfig& cfg) {
  const auto t0 = Clock::now();
  SolverReport rep;
  rep.method = to_string(SolveMethod::NewtonDamped);
  const FreeNodeMap map = free_nodes(grid);
  const std::size_t nf = map.size();
  const int n = grid.dim();

  // Newton runs on the unnormalized residual rho = (dV/du)/w; the reported
  // convergence measure stays the MS residual R = -rho/f^n. rho cannot be
  // deflated by drifting into large-f regions, so the merit 0.5 |rho|^2 is
  // an honest line-search objective.
  ScalarField u = u0;
  auto rho_field = [&](const ScalarField& state) {
    ScalarField r = discrete_volume_gradient(grid, f, state);
    for (std::size_t id = 0; id < grid.node_count(); ++id) {
      r[id] /= grid.cell_weight(id);
    }
    return r;
  };
  auto sup_ms_residual = [&](const ScalarField& rho_values,
                             const ScalarField& state) {
    double m = 0.0;
    for (std::size_t id : map.free_to_node) {
      double fn = 1.0;
      for (int p = 0; p < n; ++p) fn *= f.value(state[id]);
      const double a = std::abs(rho_values[id]) / fn;
      if (!std::isfinite(a)) return std::numeric_limits<double>::infinity();
      m = std::max(m, a);
    }
    return m;
  };

  ScalarField rho = rho_field(u);
  double rnorm = sup_ms_residual(rho, u);
  rep.residual_history.push_back(rnorm);

  const bool pin_mean = grid.topology() == Topology::Periodic &&
                        warping_is_constant(f, u0);

  for (int it = 0; it < cfg.max_iter && rnorm > cfg.tol_residual; ++it) {
    // J_rho = (Hess V) / w rowwise
    Eigen::SparseMatrix<double> jac = volume_hessian(grid, f, u, map);
    for (int col = 0; col < jac.outerSize(); ++col) {
      for (Eigen::SparseMatrix<double>::InnerIterator itr(jac, col); itr;
           ++itr) {
        itr.valueRef() /= grid.cell_weight(map.free_to_node[itr.row()]);
      }
    }

    Eigen::VectorXd rhs(pin_mean ? nf + 1 : nf);
    for (std::size_t k = 0; k < nf; ++k) rhs(k) = -rho[map.free_to_node[k]];

    Eigen::VectorXd delta;
    if (pin_mean) {
      // bordered system: pin mean(delta) = 0 to factor out the constant
      // null direction of the product case
      Eigen::SparseMatrix<double> sys(static_cast<int>(nf) + 1,
                                      static_cast<int>(nf) + 1);
      std::vector<Eigen::Triplet<double>> trips;
      trips.reserve(jac.nonZeros() + 2 * nf);
      for (int k = 0; k < jac.outerSize(); ++k) {
        for (Eigen::SparseMatrix<double>::InnerIterator itr(jac, k); itr; ++itr) {
          trips.emplace_back(static_cast<int>(itr.row()),
                             static_cast<int>(itr.col()), itr.value());
        }
      }
      for (std::size_t k = 0; k < nf; ++k) {
        trips.emplace_back(static_cast<int>(k), static_cast<int>(nf), 1.0);
        trips.emplace_back(static_cast<int>(nf), static_cast<int>(k), 1.0);
      }
      sys.setFromTriplets(trips.begin(), trips.end());
      rhs(nf) = 0.0;
      Eigen::SparseLU<Eigen::SparseMatrix<double>> lu(sys);
      if (lu.info() != Eigen::Success) {
        rep.message = "singular bordered Jacobian at iteration " +
                      std::to_string(it);
        rep.iterations = it;
        finish_report(rep, u, t0);
        return {u, rep};
      }
      delta = lu.solve(rhs);
    } else {
      Eigen::SparseLU<Eigen::SparseMatrix<double>> lu(jac);
      if (lu.info() != Eigen::Success) {
        rep.message = "singular Jacobian at iteration " + std::to_string(it) +
                      "; iterate statistics retained in this report";
        rep.iterations = it;
        finish_report(rep, u, t0);
        return {u, rep};
      }
      delta = lu.solve(rhs);
    }

    // anti-catapult cap on the raw Newton step
    double dmax = 0.0;
    for (std::size_t k = 0; k < nf; ++k) dmax = std::max(dmax, std::abs(delta(k)));
    const double cap = 100.0 * std::max(1.0, u.max_abs());
    if (!std::isfinite(dmax)) {
      rep.message = "non-finite Newton step at iteration " + std::to_string(it);
      rep.iterations = it;
      finish_report(rep, u, t0);
      return {u, rep};
    }
    if (dmax > cap) delta *= cap / dmax;

    // backtracking Armijo line search on the L2 merit + domain margin
    const double merit0 = l2_merit(rho, map);
    double step = cfg.damping;
    bool accepted = false;
    for (int bt = 0; bt < 60 && !accepted; ++bt) {
      ScalarField trial = u;
      for (std::size_t k = 0; k < nf; ++k) {
        trial[map.free_to_node[k]] += step * delta(k);
      }
      if (within_margin(f.domain(), cfg.domain_margin, trial)) {
        ScalarField trho = rho_field(trial);
        const double tmerit = l2_merit(trho, map);
        const double tnorm = sup_ms_residual(trho, trial);
        if (std::isfinite(tmerit) &&
            (tmerit <= (1.0 - 2e-4 * step) * merit0 ||
             tnorm <= cfg.tol_residual)) {
          u = std::move(trial);
          rho = std::move(trho);
          rnorm = tnorm;
          accepted = true;
        }
      }
      if (!accepted) step *= cfg.backtrack;
    }
    rep.iterations = it + 1;
    rep.residual_history.push_back(rnorm);
    if (!accepted) {
      rep.message = "line search stalled at iteration " + std::to_string(it);
      finish_report(rep, u, t0);
      return {u, rep};
    }
  }

  rep.converged = rnorm <= cfg.tol_residual;
  if (!rep.converged && rep.message.empty()) {
    rep.message = "max_iter reached";
  }
  finish_report(rep, u, t0);
  return {u, rep};
}

std::pair<ScalarField, SolverReport> descent_solve(const FiberGrid& grid,
                                                   const WarpingFunction& f,
                                                   const ScalarField& u0,
                                                   const SolverConfig& cfg) {
  const auto t0 = Clock::now();
  SolverReport rep;
  rep.method = to_string(SolveMethod::Descent);
  const FreeNodeMap map = free_nodes(grid);

  ScalarField u = u0;
  double vol = discrete_volume(grid, f, u);
  ScalarField grad = discrete_volume_gradient(grid, f, u);
  double rnorm = restricted_sup(discrete_ms_residual(grid, f, u), map);
  rep.residual_history.push_back(rnorm);

  for (int it = 0; it < cfg.max_iter && rnorm > cfg.tol_residual; ++it) {
    // steepest descent in the mesh inner product: d = -grad / w
    double dir_deriv = 0.0;
    std::vector<double> dir(map.size());
    for (std::size_t k = 0; k < map.size(); ++k) {
      const std::size_t id = map.free_to_node[k];
      dir[k] = -grad[id] / grid.cell_weight(id);
      dir_deriv += grad[id] * dir[k];
    }

    double step = cfg.damping;
    bool accepted = false;
    for (int bt = 0; bt < 60 && !accepted; ++bt) {
      ScalarField trial = u;
      for (std::size_t k = 0; k < map.size(); ++k) {
        trial[map.free_to_node[k]] += step * dir[k];
      }
      if (within_margin(f.domain(), cfg.domain_margin, trial)) {
        const double tvol = discrete_volume(grid, f, trial);
        if (tvol <= vol + 1e-4 * step * dir_deriv) {
          u = std::move(trial);
          vol = tvol;
          accepted = true;
        }
      }
      if (!accepted) step *= cfg.backtrack;
    }
    rep.iterations = it + 1;
    if (!accepted) {
      rep.message = "line search stalled at iteration " + std::to_string(it);
      break;
    }
    grad = discrete_volume_gradient(grid, f, u);
    rnorm = restricted_sup(discrete_ms_residual(grid, f, u), map);
    rep.residual_history.push_back(rnorm);
  }

  rep.converged = rnorm <= cfg.tol_residual;
  if (!rep.converged && rep.message.empty()) rep.message = "max_iter reached";
  finish_report(rep, u, t0);
  return {u, rep};
}

}  // namespace

std::pair<ScalarField, SolverReport> solve_minimal(const FiberGrid& grid,
                                                   const WarpingFunction& f,
                                                   const ScalarField& u0,
                                                   const SolverConfig& cfg) {
  check_in_domain(grid, f, u0);
  switch (cfg.method) {
    case SolveMethod::NewtonDamped:
      return newton_solve(grid, f, u0, cfg);
    case SolveMethod::Descent:
      return descent_solve(grid, f, u0, cfg);
    case SolveMethod::FlowRelax: {
      FlowResult r = flow_relax(grid, f, u0, cfg);
      return {r.trajectory.back(), r.report};
    }
  }
  throw Error("unreachable solver method");
}

FlowResult flow_relax(const FiberGrid& grid, const WarpingFunction& f,
                      const ScalarField& u0, const SolverConfig& cfg,
                      int snapshot_stride) {
  check_in_domain(grid, f, u0);
  const auto t0 = Clock::now();
  FlowResult out;
  out.report.method = to_string(SolveMethod::FlowRelax);
  const FreeNodeMap map = free_nodes(grid);
  const int n = grid.dim();

  ScalarField u = u0;
  out.trajectory.push_back(u);

  double rnorm = restricted_sup(discrete_ms_residual(grid, f, u), map);
  out.report.residual_history.push_back(rnorm);

  for (int it = 0; it < cfg.max_iter && rnorm > cfg.tol_residual; ++it) {
    // explicit stability cap: dt * sum_i 2 nu_i / h_i^2 <= 1 with the
    // per-axis diffusivity bounded by 1 / (n f g_i)
    double fmin = std::numeric_limits<double>::infinity();
    for (double v : u.values) fmin = std::min(fmin, f.value(v));
    double rate = 0.0;
    for (int i = 0; i < n; ++i) {
      rate += 2.0 / (n * fmin * grid.metric_diag(i) * grid.spacing(i) *
                     grid.spacing(i));
    }
    const double dt = cfg.flow_dt_safety / rate;

    const ScalarField res = discrete_ms_residual(grid, f, u);
    const ScalarField grad_sq = staggered_grad_sq(grid, u);
    for (std::size_t k = 0; k < map.size(); ++k) {
      const std::size_t id = map.free_to_node[k];
      const double fv = f.value(u[id]);
      const double w = std::sqrt(fv * fv + grad_sq[id]);
      u[id] += dt * (w / n) * res[id];
    }
    out.report.iterations = it + 1;

    if (!within_margin(f.domain(), 0.0, u) || !std::isfinite(u.max_abs())) {
      out.report.message = "flow left the warping domain (blow-up) at step " +
                           std::to_string(it);
      out.trajectory.push_back(u);
      finish_report(out.report, u, t0);
      return out;
    }

    rnorm = restricted_sup(discrete_ms_residual(grid, f, u), map);
    out.report.residual_history.push_back(rnorm);
    if (snapshot_stride > 0 && (it + 1) % snapshot_stride == 0) {
      out.trajectory.push_back(u);
    }
  }

  out.report.converged = rnorm <= cfg.tol_residual;
  if (!out.report.converged && out.report.message.empty()) {
    out.report.message = "step budget reached";
  }
  out.trajectory.push_back(u);
  finish_report(out.report, u, t0);
  return out;
}

// ---------------------------------------------------------------------------

PsiTransform::PsiTransform(const WarpingFunction& f, double u_ref)
    : f_(f), u_ref_(u_ref) {
  if (!f.domain().contains(u_ref)) {
    throw DomainError("psi reference point outside the warping domain");
  }
}

double PsiTransform::forward(double t) const {
  if (!f_.domain().contains(t)) {
    throw DomainError("psi argument outside the warping domain");
  }
  return integrate([this](double s) { return 1.0 / f_.value(s); }, u_ref_, t,
                   1e-13)
      .value;
}

double PsiTransform::inverse(double v) const {
  // bracket v between psi(lo) and psi(hi) by expanding around u_ref
  double lo = u_ref_, hi = u_ref_;
  double step = 1.0;
  const IntervalDomain& dom = f_.domain();
  auto clamp_into = [&](double t) {
    if (std::isfinite(dom.lower) && t <= dom.lower) {
      t = std::nextafter(dom.lower, dom.upper);
    }
    if (std::isfinite(dom.upper) && t >= dom.upper) {
      t = std::nextafter(dom.upper, dom.lower);
    }
    return t;
  };
  if (v >= 0.0) {
    double reach = forward(hi);
    for (int i = 0; i < 60 && reach < v; ++i) {
      const double next = clamp_into(hi + step);
      const double nreach = (next == hi) ? reach : forward(next);
      // psi can plateau below v when 1/f is integrable toward the endpoint
      if (next == hi || nreach <= reach + 1e-14 * (1.0 + std::abs(v))) {
        throw DomainError("psi inverse: value above the range of psi");
      }
      hi = next;
      reach = nreach;
      step *= 2.0;
    }
  } else {
    double reach = forward(lo);
    for (int i = 0; i < 60 && reach > v; ++i) {
      const double next = clamp_into(lo - step);
      const double nreach = (next == lo) ? reach : forward(next);
      if (next == lo || nreach >= reach - 1e-14 * (1.0 + std::abs(v))) {
        throw DomainError("psi inverse: value below the range of psi");
      }
      lo = next;
      reach = nreach;
      step *= 2.0;
    }
  }
  if (forward(hi) < v || forward(lo) > v) {
    throw DomainError("psi inverse: value outside the range of psi");
  }
  for (int it = 0; it < 100; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (forward(mid) < v) lo = mid;
    else hi = mid;
  }
  // Newton polish: s <- s - (psi(s) - v) f(s)
  double s = 0.5 * (lo + hi);
  for (int it = 0; it < 4; ++it) {
    const double corr = (forward(s) - v) * f_.value(s);
    const double next = clamp_into(s - corr);
    if (!std::isfinite(next)) break;
    s = next;
  }
  return s;
}

ScalarField PsiTransform::forward_field(const ScalarField& u) const {
  ScalarField v = u;
  for (double& x : v.values) x = forward(x);
  return v;
}

ScalarField transformed_residual(const FiberGrid& grid,
                                 const WarpingFunction& f,
                                 const ScalarField& v,
                                 const PsiTransform& psi) {
  const int n = grid.dim();
  // div(Dv / sqrt(1+|Dv|^2)) is the constant-warping residual of v
  const WarpingFunction one = presets::constant(1.0);
  ScalarField out = discrete_ms_residual(grid, one, v);
  const ScalarField grad_sq = staggered_grad_sq(grid, v);
  for (std::size_t id = 0; id < grid.node_count(); ++id) {
    const double t = psi.inverse(v[id]);
    out[id] -= n * f.deriv(t) / std::sqrt(1.0 + grad_sq[id]);
  }
  return out;
}

double phi_map(double x) { return x / std::sqrt(1.0 + x * x); }

ScalarField seeded_fourier_field(const FiberGrid& grid, std::uint64_t seed,
                                 int max_mode) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> amp(-1.0, 1.0);
  std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);

  struct Mode {
    double a, px, py;
    int kx, ky;
  };
  std::vector<Mode> modes;
  for (int kx = 0; kx <= max_mode; ++kx) {
    for (int ky = 0; ky <= (grid.dim() > 1 ? max_mode : 0); ++ky) {
      if (kx == 0 && ky == 0) continue;
      modes.push_back({amp(rng), phase(rng), phase(rng), kx, ky});
    }
  }
  ScalarField u(grid);
  const double lx = grid.extent(0);
  const double ly = grid.dim() > 1 ? grid.extent(1) : 1.0;
  for (std::size_t id = 0; id < grid.node_count(); ++id) {
    const auto p = grid.position(id);
    double acc = 0.0;
    for (const Mode& m : modes) {
      acc += m.a *
             std::cos(2.0 * std::numbers::pi * m.kx * (p[0] - grid.origin(0)) / lx + m.px) *
             std::cos(2.0 * std::numbers::pi * m.ky * (p[1] - (grid.dim() > 1 ? grid.origin(1) : 0.0)) / ly + m.py);
    }
    u[id] = acc;
  }
  const double scale = u.max_abs();
  if (scale > 0.0) {
    for (double& x : u.values) x /= scale;
  }
  return u;
}

}  // namespace warpgraph
