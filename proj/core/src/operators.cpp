#include "warpgraph/operators.hpp"

#include <cmath>
#include <limits>

#include "warpgraph/errors.hpp"

namespace warpgraph {

namespace {

struct StencilEntry {
  std::size_t col;
  double coef;
};

// Row of the first-derivative operator along `axis` at node `id`:
// central in the interior / across periodic wrap, second-order one-sided at
// bounded edges.
int derivative_row(const FiberGrid& g, int axis, std::size_t id,
                   StencilEntry out[3]) {
  const double h = g.spacing(axis);
  bool okm = false, okp = false;
  const std::size_t m1 = g.neighbor(id, axis, -1, okm);
  const std::size_t p1 = g.neighbor(id, axis, +1, okp);
  if (okm && okp) {
    out[0] = {m1, -0.5 / h};
    out[1] = {p1, +0.5 / h};
    return 2;
  }
  bool ok2 = false;
  if (!okm) {  // left edge: (-3 f0 + 4 f1 - f2) / 2h
    const std::size_t p2 = g.neighbor(p1, axis, +1, ok2);
    out[0] = {id, -1.5 / h};
    out[1] = {p1, +2.0 / h};
    out[2] = {p2, -0.5 / h};
    return 3;
  }
  const std::size_t m2 = g.neighbor(m1, axis, -1, ok2);
  out[0] = {id, +1.5 / h};
  out[1] = {m1, -2.0 / h};
  out[2] = {m2, +0.5 / h};
  return 3;
}

double apply_derivative(const FiberGrid& g, const std::vector<double>& v,
                        int axis, std::size_t id) {
  StencilEntry row[3];
  const int n = derivative_row(g, axis, id, row);
  double acc = 0.0;
  for (int k = 0; k < n; ++k) acc += row[k].coef * v[row[k].col];
  return acc;
}

Eigen::Matrix2d metric_at(const FiberGrid& grid, const MetricKind& kind,
                          std::size_t node, const VectorField* du) {
  Eigen::Matrix2d m = Eigen::Matrix2d::Identity();
  const int n = grid.dim();
  for (int i = 0; i < n; ++i) m(i, i) = grid.metric_diag(i);
  if (kind.tag == MetricTag::FiberG) return m;

  const double uv = (*kind.u)[node];
  const double f = kind.warp->value(uv);
  double d[2] = {0.0, 0.0};
  for (int i = 0; i < n; ++i) {
    d[i] = du ? du->at(i, node)
              : apply_derivative(grid, kind.u->values, i, node);
  }
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      m(i, j) = d[i] * d[j] + f * f * (i == j ? grid.metric_diag(i) : 0.0);
    }
  }
  if (kind.tag == MetricTag::ConformalGhat) {
    m.topLeftCorner(n, n) /= f * f;
  }
  // positive definiteness of the meaningful block
  bool pd = m(0, 0) > 0.0;
  if (n == 2) pd = pd && (m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0)) > 0.0;
  if (!pd) {
    throw NumericalError("metric matrix is not positive definite at node " +
                         std::to_string(node));
  }
  return m;
}

}  // namespace

VectorField gradient(const ScalarField& phi) {
  const FiberGrid& g = phi.grid;
  VectorField out(g);
  for (int axis = 0; axis < g.dim(); ++axis) {
    for (std::size_t id = 0; id < g.node_count(); ++id) {
      out.at(axis, id) = apply_derivative(g, phi.values, axis, id);
    }
  }
  return out;
}

ScalarField divergence(const VectorField& x) {
  const FiberGrid& g = x.grid;
  ScalarField out(g);
  // scatter the transpose: out = D^T (w X), then scale by -1/w
  for (int axis = 0; axis < g.dim(); ++axis) {
    for (std::size_t id = 0; id < g.node_count(); ++id) {
      const double wx = g.cell_weight(id) * x.at(axis, id);
      StencilEntry row[3];
      const int n = derivative_row(g, axis, id, row);
      for (int k = 0; k < n; ++k) {
        out.values[row[k].col] += row[k].coef * wx;
      }
    }
  }
  for (std::size_t id = 0; id < g.node_count(); ++id) {
    out.values[id] /= -g.cell_weight(id);
  }
  return out;
}

ScalarField second_derivative(const ScalarField& phi, int axis) {
  const FiberGrid& g = phi.grid;
  const double h2 = g.spacing(axis) * g.spacing(axis);
  ScalarField out(g);
  for (std::size_t id = 0; id < g.node_count(); ++id) {
    bool okm = false, okp = false;
    const std::size_t m1 = g.neighbor(id, axis, -1, okm);
    const std::size_t p1 = g.neighbor(id, axis, +1, okp);
    if (okm && okp) {
      out[id] = (phi[p1] - 2.0 * phi[id] + phi[m1]) / h2;
      continue;
    }
    // one-sided: (2 f0 - 5 f1 + 4 f2 - f3) / h^2 toward the interior
    const int dir = okp ? +1 : -1;
    bool ok = false;
    const std::size_t n1 = g.neighbor(id, axis, dir, ok);
    const std::size_t n2 = g.neighbor(id, axis, 2 * dir, ok);
    const std::size_t n3 = g.neighbor(id, axis, 3 * dir, ok);
    out[id] = (2.0 * phi[id] - 5.0 * phi[n1] + 4.0 * phi[n2] - phi[n3]) / h2;
  }
  return out;
}

ScalarField cross_derivative(const ScalarField& phi) {
  const FiberGrid& g = phi.grid;
  if (g.dim() < 2) throw Error("cross_derivative needs a 2-D grid");
  ScalarField dy(g);
  for (std::size_t id = 0; id < g.node_count(); ++id) {
    dy[id] = apply_derivative(g, phi.values, 1, id);
  }
  ScalarField out(g);
  for (std::size_t id = 0; id < g.node_count(); ++id) {
    out[id] = apply_derivative(g, dy.values, 0, id);
  }
  return out;
}

double inner(const ScalarField& a, const ScalarField& b) {
  double acc = 0.0;
  for (std::size_t id = 0; id < a.size(); ++id) {
    acc += a.grid.cell_weight(id) * a[id] * b[id];
  }
  return acc;
}

double inner(const VectorField& a, const VectorField& b) {
  double acc = 0.0;
  const FiberGrid& g = a.grid;
  for (int axis = 0; axis < g.dim(); ++axis) {
    for (std::size_t id = 0; id < g.node_count(); ++id) {
      acc += g.cell_weight(id) * a.at(axis, id) * b.at(axis, id);
    }
  }
  return acc;
}

Eigen::Matrix2d metric_matrix(const FiberGrid& grid, const MetricKind& kind,
                              std::size_t node) {
  return metric_at(grid, kind, node, nullptr);
}

ScalarField grad_norm_sq(const MetricKind& kind, const ScalarField& phi) {
  const FiberGrid& g = phi.grid;
  const VectorField dphi = gradient(phi);
  const VectorField du_cache =
      (kind.tag != MetricTag::FiberG) ? gradient(*kind.u) : VectorField();
  ScalarField out(g);
  const int n = g.dim();
  for (std::size_t id = 0; id < g.node_count(); ++id) {
    const Eigen::Matrix2d m = metric_at(
        g, kind, id, kind.tag != MetricTag::FiberG ? &du_cache : nullptr);
    if (n == 1) {
      const double d = dphi.at(0, id);
      out[id] = d * d / m(0, 0);
    } else {
      const Eigen::Vector2d d(dphi.at(0, id), dphi.at(1, id));
      out[id] = d.dot(m.ldlt().solve(d));
    }
  }
  return out;
}

ScalarField laplace_beltrami(const MetricKind& kind, const ScalarField& phi) {
  const FiberGrid& g = phi.grid;
  const VectorField dphi = gradient(phi);
  const VectorField du_cache =
      (kind.tag != MetricTag::FiberG) ? gradient(*kind.u) : VectorField();
  const int n = g.dim();

  VectorField flux(g);            // sqrt(det G) G^{ij} d_j phi
  std::vector<double> sqrt_det(g.node_count());
  for (std::size_t id = 0; id < g.node_count(); ++id) {
    const Eigen::Matrix2d m = metric_at(
        g, kind, id, kind.tag != MetricTag::FiberG ? &du_cache : nullptr);
    if (n == 1) {
      sqrt_det[id] = std::sqrt(m(0, 0));
      flux.at(0, id) = sqrt_det[id] * dphi.at(0, id) / m(0, 0);
    } else {
      const double det = m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
      sqrt_det[id] = std::sqrt(det);
      const Eigen::Vector2d d(dphi.at(0, id), dphi.at(1, id));
      const Eigen::Vector2d s = sqrt_det[id] * m.ldlt().solve(d).head<2>();
      flux.at(0, id) = s(0);
      flux.at(1, id) = s(1);
    }
  }
  ScalarField out(g);
  for (std::size_t id = 0; id < g.node_count(); ++id) {
    double acc = 0.0;
    for (int axis = 0; axis < n; ++axis) {
      StencilEntry row[3];
      const int cnt = derivative_row(g, axis, id, row);
      for (int k = 0; k < cnt; ++k) {
        acc += row[k].coef *
               flux.comps[static_cast<std::size_t>(axis) * g.node_count() +
                          row[k].col];
      }
    }
    out[id] = acc / sqrt_det[id];
  }
  return out;
}

std::pair<double, double> metric_eigen_bounds(const FiberGrid& grid,
                                              const MetricKind& kind_a,
                                              const MetricKind& kind_b) {
  const int n = grid.dim();
  const VectorField du_a = (kind_a.tag != MetricTag::FiberG)
                               ? gradient(*kind_a.u)
                               : VectorField();
  const VectorField du_b = (kind_b.tag != MetricTag::FiberG)
                               ? gradient(*kind_b.u)
                               : VectorField();
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  for (std::size_t id = 0; id < grid.node_count(); ++id) {
    const Eigen::Matrix2d a = metric_at(
        grid, kind_a, id, kind_a.tag != MetricTag::FiberG ? &du_a : nullptr);
    const Eigen::Matrix2d b = metric_at(
        grid, kind_b, id, kind_b.tag != MetricTag::FiberG ? &du_b : nullptr);
    if (n == 1) {
      const double l = a(0, 0) / b(0, 0);
      lo = std::min(lo, l);
      hi = std::max(hi, l);
    } else {
      Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::Matrix2d> es(
          a, b, Eigen::EigenvaluesOnly | Eigen::Ax_lBx);
      if (es.info() != Eigen::Success) {
        throw NumericalError("generalized eigensolve failed at node " +
                             std::to_string(id));
      }
      lo = std::min(lo, es.eigenvalues().minCoeff());
      hi = std::max(hi, es.eigenvalues().maxCoeff());
    }
  }
  return {lo, hi};
}

}  // namespace warpgraph
