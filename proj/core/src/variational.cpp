#include "warpgraph/variational.hpp"

#include <cmath>
#include <sstream>

#include "warpgraph/errors.hpp"

namespace warpgraph {

namespace {

double ipow(double x, int k) {
  double r = 1.0;
  for (int i = 0; i < std::abs(k); ++i) r *= x;
  return k >= 0 ? r : 1.0 / r;
}

// Local stencil of one node: the node value plus one half-point difference
// per available side and axis.
struct LocalStencil {
  std::size_t node;
  double u;
  int nvars;                     // 1 + number of present neighbors
  std::size_t vars[5];           // global node ids, vars[0] == node
  // per axis: side weights and differences
  double aL[2], aR[2];           // averaging weights (0, 1/2 or 1)
  double dL[2], dR[2];           // u - uL, uR - u
  int slotL[2], slotR[2];        // local slot of the neighbor or -1
  double c[2];                   // 1 / (g_i h_i^2)
  double m;                      // averaged |Du|^2
};

LocalStencil local_stencil(const FiberGrid& g, const ScalarField& u,
                           std::size_t id) {
  LocalStencil s{};
  s.node = id;
  s.u = u[id];
  s.vars[0] = id;
  s.nvars = 1;
  s.m = 0.0;
  for (int i = 0; i < g.dim(); ++i) {
    bool okm = false, okp = false;
    const std::size_t mi = g.neighbor(id, i, -1, okm);
    const std::size_t pi = g.neighbor(id, i, +1, okp);
    s.c[i] = 1.0 / (g.metric_diag(i) * g.spacing(i) * g.spacing(i));
    s.aL[i] = okm ? (okp ? 0.5 : 1.0) : 0.0;
    s.aR[i] = okp ? (okm ? 0.5 : 1.0) : 0.0;
    s.dL[i] = okm ? (s.u - u[mi]) : 0.0;
    s.dR[i] = okp ? (u[pi] - s.u) : 0.0;
    s.slotL[i] = -1;
    s.slotR[i] = -1;
    if (okm) {
      s.slotL[i] = s.nvars;
      s.vars[s.nvars++] = mi;
    }
    if (okp) {
      s.slotR[i] = s.nvars;
      s.vars[s.nvars++] = pi;
    }
    s.m += s.c[i] * (s.aL[i] * s.dL[i] * s.dL[i] + s.aR[i] * s.dR[i] * s.dR[i]);
  }
  return s;
}

// Density Psi(u, m) = f(u)^(n-1) sqrt(f(u)^2 + m) and its derivatives.
struct Density {
  double psi, psi_u, psi_m, psi_uu, psi_um, psi_mm;
  double w;  // sqrt(f^2 + m)
  double f, f1;
};

Density density(const WarpingFunction& warp, int n, double u, double m) {
  Density d{};
  const double f = warp.value(u);
  const double f1 = warp.deriv(u);
  const double f2 = warp.deriv2(u);
  const double w = std::sqrt(f * f + m);
  const double fn1 = ipow(f, n - 1);
  const double fn2 = ipow(f, n - 2);
  const double fn3 = ipow(f, n - 3);
  const double bracket = (n - 1) * w + f * f / w;
  d.f = f;
  d.f1 = f1;
  d.w = w;
  d.psi = fn1 * w;
  d.psi_u = fn2 * f1 * bracket;
  d.psi_m = fn1 / (2.0 * w);
  d.psi_uu = ((n - 2) * fn3 * f1 * f1 + fn2 * f2) * bracket +
             fn1 * f1 * f1 * ((n + 1) / w - f * f / (w * w * w));
  d.psi_um = fn2 * f1 * ((n - 1) / (2.0 * w) - f * f / (2.0 * w * w * w));
  d.psi_mm = -fn1 / (4.0 * w * w * w);
  return d;
}

}  // namespace

void check_in_domain(const FiberGrid& grid, const WarpingFunction& f,
                     const ScalarField& u) {
  std::vector<std::size_t> bad;
  for (std::size_t id = 0; id < grid.node_count(); ++id) {
    if (!f.domain().contains(u[id])) bad.push_back(id);
  }
  if (!bad.empty()) {
    std::ostringstream os;
    os << "u leaves the domain of warping '" << f.name() << "' at " << bad.size()
       << " node(s), first offenders:";
    for (std::size_t i = 0; i < bad.size() && i < 8; ++i) {
      os << " " << bad[i] << " (u=" << u[bad[i]] << ")";
    }
    throw DomainError(os.str());
  }
}

double discrete_volume(const FiberGrid& grid, const WarpingFunction& f,
                       const ScalarField& u) {
  check_in_domain(grid, f, u);
  const int n = grid.dim();
  double v = 0.0;
  for (std::size_t id = 0; id < grid.node_count(); ++id) {
    const LocalStencil s = local_stencil(grid, u, id);
    v += grid.cell_weight(id) * density(f, n, s.u, s.m).psi;
  }
  return v;
}

ScalarField staggered_grad_sq(const FiberGrid& grid, const ScalarField& u) {
  ScalarField out(grid);
  for (std::size_t id = 0; id < grid.node_count(); ++id) {
    out[id] = local_stencil(grid, u, id).m;
  }
  return out;
}

ScalarField discrete_volume_gradient(const FiberGrid& grid,
                                     const WarpingFunction& f,
                                     const ScalarField& u) {
  check_in_domain(grid, f, u);
  const int n = grid.dim();
  ScalarField grad(grid);
  for (std::size_t id = 0; id < grid.node_count(); ++id) {
    const LocalStencil s = local_stencil(grid, u, id);
    const Density d = density(f, n, s.u, s.m);
    const double w = grid.cell_weight(id);
    // dm/du at the center and at each neighbor slot
    double m_u = 0.0;
    for (int i = 0; i < grid.dim(); ++i) {
      m_u += 2.0 * s.c[i] * (s.aL[i] * s.dL[i] - s.aR[i] * s.dR[i]);
    }
    grad[id] += w * (d.psi_u + d.psi_m * m_u);
    for (int i = 0; i < grid.dim(); ++i) {
      if (s.slotL[i] >= 0) {
        grad[s.vars[s.slotL[i]]] += w * d.psi_m * (-2.0 * s.c[i] * s.aL[i] * s.dL[i]);
      }
      if (s.slotR[i] >= 0) {
        grad[s.vars[s.slotR[i]]] += w * d.psi_m * (2.0 * s.c[i] * s.aR[i] * s.dR[i]);
      }
    }
  }
  return grad;
}

ScalarField discrete_ms_residual(const FiberGrid& grid,
                                 const WarpingFunction& f,
                                 const ScalarField& u) {
  const int n = grid.dim();
  ScalarField r = discrete_volume_gradient(grid, f, u);
  for (std::size_t id = 0; id < grid.node_count(); ++id) {
    r[id] = -r[id] / (grid.cell_weight(id) * ipow(f.value(u[id]), n));
  }
  return r;
}

FreeNodeMap free_nodes(const FiberGrid& grid) {
  FreeNodeMap map;
  map.node_to_free.assign(grid.node_count(), -1);
  for (std::size_t id = 0; id < grid.node_count(); ++id) {
    const bool free = grid.topology() == Topology::Periodic || grid.interior(id);
    if (free) {
      map.node_to_free[id] = static_cast<std::ptrdiff_t>(map.free_to_node.size());
      map.free_to_node.push_back(id);
    }
  }
  return map;
}

Eigen::SparseMatrix<double> volume_hessian(const FiberGrid& grid,
                                           const WarpingFunction& f,
                                           const ScalarField& u,
                                           const FreeNodeMap& map) {
  check_in_domain(grid, f, u);
  const int n = grid.dim();
  const std::size_t nf = map.size();

  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(nf * 13);

  for (std::size_t id = 0; id < grid.node_count(); ++id) {
    const LocalStencil s = local_stencil(grid, u, id);
    const Density d = density(f, n, s.u, s.m);
    const double w = grid.cell_weight(id);

    double m_slot[5] = {0, 0, 0, 0, 0};   // dm/d(var)
    for (int i = 0; i < grid.dim(); ++i) {
      m_slot[0] += 2.0 * s.c[i] * (s.aL[i] * s.dL[i] - s.aR[i] * s.dR[i]);
      if (s.slotL[i] >= 0) m_slot[s.slotL[i]] = -2.0 * s.c[i] * s.aL[i] * s.dL[i];
      if (s.slotR[i] >= 0) m_slot[s.slotR[i]] = 2.0 * s.c[i] * s.aR[i] * s.dR[i];
    }
    // d2m/d(var)d(var): nonzero entries
    double m2_00 = 0.0;
    for (int i = 0; i < grid.dim(); ++i) {
      m2_00 += 2.0 * s.c[i] * (s.aL[i] + s.aR[i]);
    }

    auto hess_entry = [&](int a, int b) {
      double h = d.psi_mm * m_slot[a] * m_slot[b];
      if (a == 0 && b == 0) {
        h += d.psi_uu + 2.0 * d.psi_um * m_slot[0] + d.psi_m * m2_00;
      } else if (a == 0 || b == 0) {
        const int nb = (a == 0) ? b : a;
        h += d.psi_um * m_slot[nb];
        // d2m/du dvL = -2c aL, d2m/du dvR = -2c aR
        for (int i = 0; i < grid.dim(); ++i) {
          if (s.slotL[i] == nb) h += d.psi_m * (-2.0 * s.c[i] * s.aL[i]);
          if (s.slotR[i] == nb) h += d.psi_m * (-2.0 * s.c[i] * s.aR[i]);
        }
      } else if (a == b) {
        for (int i = 0; i < grid.dim(); ++i) {
          if (s.slotL[i] == a) h += d.psi_m * (2.0 * s.c[i] * s.aL[i]);
          if (s.slotR[i] == a) h += d.psi_m * (2.0 * s.c[i] * s.aR[i]);
        }
      }
      return w * h;
    };

    for (int a = 0; a < s.nvars; ++a) {
      const std::ptrdiff_t row = map.node_to_free[s.vars[a]];
      if (row < 0) continue;
      for (int b = 0; b < s.nvars; ++b) {
        const std::ptrdiff_t col = map.node_to_free[s.vars[b]];
        if (col < 0) continue;
        trips.emplace_back(static_cast<int>(row), static_cast<int>(col),
                           hess_entry(a, b));
      }
    }
  }

  Eigen::SparseMatrix<double> hess(static_cast<int>(nf),
                                   static_cast<int>(nf));
  hess.setFromTriplets(trips.begin(), trips.end());
  return hess;
}

Eigen::SparseMatrix<double> residual_jacobian(const FiberGrid& grid,
                                              const WarpingFunction& f,
                                              const ScalarField& u,
                                              const FreeNodeMap& map) {
  const int n = grid.dim();
  const std::size_t nf = map.size();
  // R_k = -G_k / (w_k f(u_k)^n), so
  // dR_k/du_l = -H_kl / (w_k f^n) + delta_kl n f' G_k / (w_k f^(n+1))
  Eigen::SparseMatrix<double> jac = volume_hessian(grid, f, u, map);
  const ScalarField gradV = discrete_volume_gradient(grid, f, u);

  for (int col = 0; col < jac.outerSize(); ++col) {
    for (Eigen::SparseMatrix<double>::InnerIterator it(jac, col); it; ++it) {
      const std::size_t id = map.free_to_node[it.row()];
      it.valueRef() *= -1.0 / (grid.cell_weight(id) * ipow(f.value(u[id]), n));
    }
  }
  std::vector<Eigen::Triplet<double>> diag;
  diag.reserve(nf);
  for (std::size_t k = 0; k < nf; ++k) {
    const std::size_t id = map.free_to_node[k];
    const double fv = f.value(u[id]);
    diag.emplace_back(static_cast<int>(k), static_cast<int>(k),
                      static_cast<double>(n) * f.deriv(u[id]) * gradV[id] /
                          (grid.cell_weight(id) * ipow(fv, n + 1)));
  }
  Eigen::SparseMatrix<double> corr(static_cast<int>(nf),
                                   static_cast<int>(nf));
  corr.setFromTriplets(diag.begin(), diag.end());
  return jac + corr;
}

}  // namespace warpgraph
