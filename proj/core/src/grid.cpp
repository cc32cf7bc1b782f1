#include "warpgraph/grid.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "warpgraph/errors.hpp"

namespace warpgraph {

namespace {

void validate(const std::vector<GridAxis>& axes,
              const std::array<double, 2>& metric) {
  if (axes.empty() || axes.size() > 2) {
    throw Error("fiber grids support dimension 1 or 2");
  }
  for (const GridAxis& a : axes) {
    if (a.count < 3) throw Error("grid axes need at least 3 nodes");
    if (!(a.extent > 0.0)) throw Error("grid extents must be positive");
  }
  for (std::size_t i = 0; i < axes.size(); ++i) {
    if (!(metric[i] > 0.0)) {
      throw Error("fiber metric diagonal entries must be positive");
    }
  }
}

}  // namespace

FiberGrid FiberGrid::torus(std::vector<GridAxis> axes,
                           std::array<double, 2> metric_diag) {
  validate(axes, metric_diag);
  FiberGrid g;
  g.dim_ = static_cast<int>(axes.size());
  g.topology_ = Topology::Periodic;
  g.nodes_ = 1;
  for (int i = 0; i < g.dim_; ++i) {
    g.axes_[i] = axes[i];
    g.spacing_[i] = axes[i].extent / axes[i].count;  // last node < origin+extent
    g.metric_[i] = metric_diag[i];
    g.nodes_ *= static_cast<std::size_t>(axes[i].count);
  }
  return g;
}

FiberGrid FiberGrid::box(std::vector<GridAxis> axes, BoundaryPolicy policy,
                         std::array<double, 2> metric_diag) {
  validate(axes, metric_diag);
  FiberGrid g;
  g.dim_ = static_cast<int>(axes.size());
  g.topology_ = Topology::Bounded;
  g.policy_ = policy;
  g.nodes_ = 1;
  for (int i = 0; i < g.dim_; ++i) {
    g.axes_[i] = axes[i];
    g.spacing_[i] = axes[i].extent / (axes[i].count - 1);
    g.metric_[i] = metric_diag[i];
    g.nodes_ *= static_cast<std::size_t>(axes[i].count);
  }
  return g;
}

double FiberGrid::sqrt_det_metric() const {
  double det = 1.0;
  for (int i = 0; i < dim_; ++i) det *= metric_[i];
  return std::sqrt(det);
}

bool FiberGrid::interior(std::size_t id) const {
  if (topology_ == Topology::Periodic) return true;
  const auto c = coords_of(id);
  for (int i = 0; i < dim_; ++i) {
    if (c[i] == 0 || c[i] == axes_[i].count - 1) return false;
  }
  return true;
}

double FiberGrid::cell_weight(std::size_t id) const {
  double w = sqrt_det_metric();
  const auto c = coords_of(id);
  for (int i = 0; i < dim_; ++i) {
    w *= spacing_[i];
    if (topology_ == Topology::Bounded &&
        (c[i] == 0 || c[i] == axes_[i].count - 1)) {
      w *= 0.5;
    }
  }
  return w;
}

std::size_t FiberGrid::neighbor(std::size_t id, int axis, int step,
                                bool& exists) const {
  auto c = coords_of(id);
  int v = c[axis] + step;
  const int n = axes_[axis].count;
  if (topology_ == Topology::Periodic) {
    v = ((v % n) + n) % n;
    exists = true;
  } else {
    exists = (v >= 0 && v < n);
    if (!exists) return id;
  }
  c[axis] = v;
  return index(c[0], c[1]);
}

ScalarField ScalarField::sample(const FiberGrid& g,
                                const std::function<double(double, double)>& fn) {
  ScalarField out(g);
  for (std::size_t id = 0; id < g.node_count(); ++id) {
    const auto p = g.position(id);
    out.values[id] = fn(p[0], p[1]);
  }
  return out;
}

double ScalarField::min() const {
  return *std::min_element(values.begin(), values.end());
}

double ScalarField::max() const {
  return *std::max_element(values.begin(), values.end());
}

double ScalarField::mean() const {
  return std::accumulate(values.begin(), values.end(), 0.0) /
         static_cast<double>(values.size());
}

double ScalarField::stddev() const {
  const double mu = mean();
  double acc = 0.0;
  for (double v : values) acc += (v - mu) * (v - mu);
  return std::sqrt(acc / static_cast<double>(values.size()));
}

double ScalarField::max_abs() const {
  double m = 0.0;
  for (double v : values) m = std::max(m, std::abs(v));
  return m;
}

}  // namespace warpgraph
