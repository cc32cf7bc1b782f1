#include "warpgraph/geometry.hpp"

#include <cmath>
#include <sstream>

#include "warpgraph/errors.hpp"
#include "warpgraph/quadrature.hpp"
#include "warpgraph/variational.hpp"

namespace warpgraph {

Eigen::Matrix2d GraphState::shape_at(std::size_t id) const {
  const int n = dim();
  Eigen::Matrix2d a = Eigen::Matrix2d::Zero();
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) {
      a(r, c) = shape[id * n * n + r * n + c];
    }
  }
  return a;
}

GraphState assemble_state(const FiberGrid& grid, const WarpingFunction& f,
                          const ScalarField& u) {
  check_in_domain(grid, f, u);
  GraphState st(grid, f);
  st.u = u;
  st.du = gradient(u);
  const int n = grid.dim();

  // Hessian fields
  ScalarField uxx = second_derivative(u, 0);
  ScalarField uyy = n > 1 ? second_derivative(u, 1) : ScalarField(grid);
  ScalarField uxy = n > 1 ? cross_derivative(u) : ScalarField(grid);

  for (std::size_t id = 0; id < grid.node_count(); ++id) {
    const double fv = f.value(u[id]);
    const double f1 = f.deriv(u[id]);
    double g[2] = {grid.metric_diag(0), n > 1 ? grid.metric_diag(1) : 1.0};
    double d[2] = {st.du.at(0, id), n > 1 ? st.du.at(1, id) : 0.0};
    double hess[2][2] = {{uxx[id], n > 1 ? uxy[id] : 0.0},
                         {n > 1 ? uxy[id] : 0.0, n > 1 ? uyy[id] : 0.0}};

    double du_sq = 0.0;
    for (int i = 0; i < n; ++i) du_sq += d[i] * d[i] / g[i];
    const double w = std::sqrt(fv * fv + du_sq);
    st.w[id] = w;
    st.cos_theta[id] = fv / w;
    for (int i = 0; i < n; ++i) {
      st.normal_fiber.at(i, id) = -st.cos_theta[id] * d[i] / (g[i] * fv * fv);
    }

    // h_i = g^{kl} u_k Hess_{li} (contraction of the Hessian with Du)
    double hdot[2] = {0.0, 0.0};
    for (int i = 0; i < n; ++i) {
      for (int k = 0; k < n; ++k) hdot[i] += d[k] * hess[k][i] / g[k];
    }

    double trace = 0.0;
    for (int m = 0; m < n; ++m) {
      for (int i = 0; i < n; ++i) {
        double a = (m == i) ? -f1 / w : 0.0;
        a += hess[m][i] / (g[m] * fv * w);
        a -= d[m] / g[m] * (fv * f1 * d[i] + hdot[i]) / (fv * w * w * w);
        st.shape[id * n * n + m * n + i] = a;
        if (m == i) trace += a;
      }
    }
    st.mean_curvature[id] = trace / n;
  }
  return st;
}

ScalarField ms_residual(const FiberGrid& grid, const WarpingFunction& f,
                        const ScalarField& u) {
  return discrete_ms_residual(grid, f, u);
}

// ---------------------------------------------------------------------------
// Identities

IdentityKind identity_from_string(const std::string& name) {
  if (name == "dtau") return IdentityKind::DTau;
  if (name == "dftau") return IdentityKind::DFTau;
  if (name == "conf_tau") return IdentityKind::ConfTau;
  if (name == "conf_ftau") return IdentityKind::ConfFTau;
  if (name == "arccot") return IdentityKind::Arccot;
  if (name == "F_low") return IdentityKind::FLower;
  if (name == "F_up") return IdentityKind::FUpper;
  if (name == "lcos") return IdentityKind::LCos;
  throw Error("unknown identity '" + name + "'");
}

std::string to_string(IdentityKind which) {
  switch (which) {
    case IdentityKind::DTau: return "dtau";
    case IdentityKind::DFTau: return "dftau";
    case IdentityKind::ConfTau: return "conf_tau";
    case IdentityKind::ConfFTau: return "conf_ftau";
    case IdentityKind::Arccot: return "arccot";
    case IdentityKind::FLower: return "F_low";
    case IdentityKind::FUpper: return "F_up";
    case IdentityKind::LCos: return "lcos";
  }
  return "?";
}

namespace {

bool needs_minimality(IdentityKind which) {
  switch (which) {
    case IdentityKind::ConfTau:
    case IdentityKind::ConfFTau:
    case IdentityKind::Arccot:
    case IdentityKind::FLower:
    case IdentityKind::FUpper:
      return true;
    default:
      return false;
  }
}

void require_constant_warping(const GraphState& st) {
  const double lo = st.u.min(), hi = st.u.max();
  double dmax = 0.0;
  for (int i = 0; i <= 32; ++i) {
    const double t = lo + (hi - lo) * i / 32.0;
    dmax = std::max(dmax, std::abs(st.warp.deriv(t)));
  }
  if (dmax > 1e-12) {
    throw HypothesisError(
        "lcos identity requires a constant warping (product ambient); "
        "max |f'| over the range of u is " + std::to_string(dmax));
  }
}

// g_Sigma(grad a, grad b) pointwise via the graph metric.
ScalarField graph_metric_pairing(const GraphState& st, const ScalarField& a,
                                 const ScalarField& b) {
  const FiberGrid& g = st.grid;
  const VectorField da = gradient(a);
  const VectorField db = gradient(b);
  const MetricKind kind = MetricKind::graph(st.u, st.warp);
  ScalarField out(g);
  const int n = g.dim();
  for (std::size_t id = 0; id < g.node_count(); ++id) {
    const Eigen::Matrix2d m = metric_matrix(g, kind, id);
    if (n == 1) {
      out[id] = da.at(0, id) * db.at(0, id) / m(0, 0);
    } else {
      const Eigen::Vector2d va(da.at(0, id), da.at(1, id));
      const Eigen::Vector2d vb(db.at(0, id), db.at(1, id));
      out[id] = va.dot(m.ldlt().solve(vb));
    }
  }
  return out;
}

}  // namespace

ScalarField formula_laplacian(IdentityKind which, const GraphState& state,
                              const FormulaOptions& opts) {
  const FiberGrid& grid = state.grid;
  const int n = grid.dim();
  const bool strict = opts.assume_minimal;

  if (strict && needs_minimality(which)) {
    const double defect = state.minimality_defect();
    if (defect > opts.minimal_tol) {
      std::ostringstream os;
      os << to_string(which) << " is stated for minimal hypersurfaces; "
         << "|H|inf = " << defect << " exceeds tolerance " << opts.minimal_tol;
      throw HypothesisError(os.str());
    }
  }
  if (which == IdentityKind::LCos) require_constant_warping(state);

  ScalarField out(grid);
  const double nn = static_cast<double>(n);

  if (which == IdentityKind::LCos) {
    // flat fiber: Ric == 0, so
    //   Delta cos(theta) = -cos(theta) tr(A^2) - n g(grad H, grad tau)
    const ScalarField pair = graph_metric_pairing(state, state.mean_curvature,
                                                  state.u);
    for (std::size_t id = 0; id < grid.node_count(); ++id) {
      const Eigen::Matrix2d a = state.shape_at(id);
      const double tr_a2 = (a * a).topLeftCorner(n, n).trace();
      out[id] = -state.cos_theta[id] * tr_a2 - nn * pair[id];
    }
    return out;
  }

  for (std::size_t id = 0; id < grid.node_count(); ++id) {
    const double uv = state.u[id];
    const double f = state.warp.value(uv);
    const double f1 = state.warp.deriv(uv);
    const double lf2 = state.warp.log_deriv2(uv);
    const double cos = state.cos_theta[id];
    const double q_sigma = 1.0 - cos * cos;   // |grad tau|^2 in g_Sigma
    const double q_tilde = f * f * q_sigma;   // conformal-norm bridge
    const double h = state.mean_curvature[id];

    switch (which) {
      case IdentityKind::DTau:
        out[id] = (f1 / f) * (nn - q_sigma) + nn * h * cos;
        break;
      case IdentityKind::DFTau:
        out[id] = nn * f1 * f1 / f + f * lf2 * q_sigma + nn * h * f1 * cos;
        break;
      case IdentityKind::ConfTau: {
        double v = nn * f * f1 - (nn - 1.0) * (f1 / f) * q_tilde;
        if (!strict) v += nn * h * f * f * cos;
        out[id] = v;
        break;
      }
      case IdentityKind::ConfFTau: {
        double v = nn * f * f1 * f1 +
                   (f * lf2 - (nn - 2.0) * f1 * f1 / f) * q_tilde;
        if (!strict) v += nn * h * f1 * f * f * cos;
        out[id] = v;
        break;
      }
      case IdentityKind::Arccot: {
        // chain rule through the conformal Laplacian of f(tau):
        //   Delta~ arccot f = -Delta~ f(tau)/(1+f^2) + 2 f |grad~ f|^2/(1+f^2)^2
        double conf_ftau = nn * f * f1 * f1 +
                           (f * lf2 - (nn - 2.0) * f1 * f1 / f) * q_tilde;
        if (!strict) conf_ftau += nn * h * f1 * f * f * cos;
        const double grad_f_sq = f1 * f1 * q_tilde;
        const double opf2 = 1.0 + f * f;
        out[id] = -conf_ftau / opf2 + 2.0 * f * grad_f_sq / (opf2 * opf2);
        break;
      }
      case IdentityKind::FLower:
      case IdentityKind::FUpper: {
        double v = f1 * f * f * (nn - (nn - 2.0) * q_tilde / (f * f));
        if (!strict) v += nn * h * f * f * f * cos;
        out[id] = (which == IdentityKind::FLower) ? v : -v;
        break;
      }
      default:
        break;
    }
  }
  return out;
}

ScalarField arccot_display_variant(const GraphState& state) {
  const FiberGrid& grid = state.grid;
  const double nn = static_cast<double>(grid.dim());
  ScalarField out(grid);
  for (std::size_t id = 0; id < grid.node_count(); ++id) {
    const double uv = state.u[id];
    const double f = state.warp.value(uv);
    const double f1 = state.warp.deriv(uv);
    const double lf2 = state.warp.log_deriv2(uv);
    const double cos = state.cos_theta[id];
    const double q = f * f * (1.0 - cos * cos);
    const double opf2 = 1.0 + f * f;
    out[id] = -(f / opf2) * lf2 * q -
              (f1 * f1 / (f * f * opf2)) *
                  (nn * (f * f - q) * f + 2.0 * q / (f * opf2));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Witness fields

WitnessKind witness_from_string(const std::string& name) {
  if (name == "arccot_f_tau") return WitnessKind::ArccotFTau;
  if (name == "F_lower") return WitnessKind::FLower;
  if (name == "F_upper") return WitnessKind::FUpper;
  if (name == "cos_theta") return WitnessKind::CosTheta;
  if (name == "sech_sq") return WitnessKind::SechSq;
  throw Error("unknown witness '" + name + "'");
}

std::string to_string(WitnessKind kind) {
  switch (kind) {
    case WitnessKind::ArccotFTau: return "arccot_f_tau";
    case WitnessKind::FLower: return "F_lower";
    case WitnessKind::FUpper: return "F_upper";
    case WitnessKind::CosTheta: return "cos_theta";
    case WitnessKind::SechSq: return "sech_sq";
  }
  return "?";
}

ScalarField witness_field(WitnessKind kind, const GraphState& state) {
  const FiberGrid& grid = state.grid;
  ScalarField out(grid);
  switch (kind) {
    case WitnessKind::ArccotFTau:
      for (std::size_t id = 0; id < grid.node_count(); ++id) {
        out[id] = std::atan2(1.0, state.warp.value(state.u[id]));
      }
      break;
    case WitnessKind::FLower: {
      const double s0 = state.u.min();
      for (std::size_t id = 0; id < grid.node_count(); ++id) {
        out[id] = integrate([&](double s) { return state.warp.value(s); }, s0,
                            state.u[id], 1e-13)
                      .value;
      }
      break;
    }
    case WitnessKind::FUpper: {
      const double s1 = state.u.max();
      for (std::size_t id = 0; id < grid.node_count(); ++id) {
        out[id] = integrate([&](double s) { return state.warp.value(s); },
                            state.u[id], s1, 1e-13)
                      .value;
      }
      break;
    }
    case WitnessKind::CosTheta:
      out = state.cos_theta;
      break;
    case WitnessKind::SechSq:
      for (std::size_t id = 0; id < grid.node_count(); ++id) {
        const double x = grid.position(id)[0];
        const double c = std::cosh(x);
        out[id] = 1.0 / (c * c);
      }
      break;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Refinement report

IdentityReport identity_report(IdentityKind which, const WarpingFunction& f,
                               const std::function<double(double, double)>& u_fn,
                               const std::vector<FiberGrid>& levels,
                               double order_threshold) {
  if (levels.size() < 2) throw Error("identity_report needs >= 2 levels");
  IdentityReport rep;
  rep.which = which;
  rep.order_threshold = order_threshold;

  FormulaOptions opts;
  opts.assume_minimal = false;  // completed identities hold for any graph

  std::vector<double> hs;
  for (const FiberGrid& grid : levels) {
    const ScalarField u = ScalarField::sample(grid, u_fn);
    const GraphState st = assemble_state(grid, f, u);

    ScalarField field(grid);
    MetricKind metric = MetricKind::graph(st.u, st.warp);
    switch (which) {
      case IdentityKind::DTau:
        field = st.u;
        break;
      case IdentityKind::DFTau:
        field = ScalarField(grid);
        for (std::size_t id = 0; id < grid.node_count(); ++id) {
          field[id] = f.value(st.u[id]);
        }
        break;
      case IdentityKind::ConfTau:
        field = st.u;
        metric = MetricKind::conformal(st.u, st.warp);
        break;
      case IdentityKind::ConfFTau:
        for (std::size_t id = 0; id < grid.node_count(); ++id) {
          field[id] = f.value(st.u[id]);
        }
        metric = MetricKind::conformal(st.u, st.warp);
        break;
      case IdentityKind::Arccot:
        field = witness_field(WitnessKind::ArccotFTau, st);
        metric = MetricKind::conformal(st.u, st.warp);
        break;
      case IdentityKind::FLower:
        field = witness_field(WitnessKind::FLower, st);
        metric = MetricKind::conformal(st.u, st.warp);
        break;
      case IdentityKind::FUpper:
        field = witness_field(WitnessKind::FUpper, st);
        metric = MetricKind::conformal(st.u, st.warp);
        break;
      case IdentityKind::LCos:
        field = st.cos_theta;
        break;
    }

    const ScalarField lhs = laplace_beltrami(metric, field);
    const ScalarField rhs = formula_laplacian(which, st, opts);
    double gap = 0.0;
    for (std::size_t id = 0; id < grid.node_count(); ++id) {
      gap = std::max(gap, std::abs(lhs[id] - rhs[id]));
    }
    rep.levels.push_back(grid.count(0));
    rep.max_abs_gap.push_back(gap);
    hs.push_back(grid.spacing(0));

    if (which == IdentityKind::Arccot) {
      const ScalarField disp = arccot_display_variant(st);
      const ScalarField ours = formula_laplacian(
          which, st, FormulaOptions{.assume_minimal = true, .minimal_tol = 1e30});
      for (std::size_t id = 0; id < grid.node_count(); ++id) {
        rep.display_variant_gap =
            std::max(rep.display_variant_gap, std::abs(disp[id] - ours[id]));
      }
    }
  }

  rep.exact = true;
  for (double g : rep.max_abs_gap) rep.exact = rep.exact && g <= 1e-12;

  bool decreasing = true;
  for (std::size_t k = 0; k + 1 < rep.max_abs_gap.size(); ++k) {
    const double g0 = rep.max_abs_gap[k], g1 = rep.max_abs_gap[k + 1];
    decreasing = decreasing && g1 < g0;
    const double order = (g1 > 0.0 && g0 > 0.0)
                             ? std::log(g0 / g1) / std::log(hs[k] / hs[k + 1])
                             : std::numeric_limits<double>::infinity();
    rep.observed_order.push_back(order);
  }
  const double g_first = rep.max_abs_gap.front();
  const double g_last = rep.max_abs_gap.back();
  rep.order_overall = (g_first > 0.0 && g_last > 0.0)
                          ? std::log(g_first / g_last) /
                                std::log(hs.front() / hs.back())
                          : std::numeric_limits<double>::infinity();
  rep.pass = rep.exact || (decreasing && rep.order_overall >= order_threshold);
  return rep;
}

}  // namespace warpgraph
