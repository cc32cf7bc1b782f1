#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <vector>

namespace warpgraph {

enum class Topology { Periodic, Bounded };
enum class BoundaryPolicy { Dirichlet, OneSided };

struct GridAxis {
  double origin = 0.0;
  double extent = 1.0;
  int count = 0;
};

/// Uniform structured discretization of the fiber (M, g): a flat torus or a
/// bounded box in dimension 1 or 2, with a constant diagonal metric.
/// Node ordering is row-major with axis x fastest.
class FiberGrid {
 public:
  FiberGrid() = default;

  static FiberGrid torus(std::vector<GridAxis> axes,
                         std::array<double, 2> metric_diag = {1.0, 1.0});
  static FiberGrid box(std::vector<GridAxis> axes,
                       BoundaryPolicy policy = BoundaryPolicy::Dirichlet,
                       std::array<double, 2> metric_diag = {1.0, 1.0});

  int dim() const { return dim_; }
  Topology topology() const { return topology_; }
  BoundaryPolicy boundary_policy() const { return policy_; }

  int count(int axis) const { return axes_[axis].count; }
  double origin(int axis) const { return axes_[axis].origin; }
  double extent(int axis) const { return axes_[axis].extent; }
  double spacing(int axis) const { return spacing_[axis]; }
  double metric_diag(int axis) const { return metric_[axis]; }
  double sqrt_det_metric() const;

  std::size_t node_count() const { return nodes_; }
  std::size_t index(int ix, int iy = 0) const {
    return static_cast<std::size_t>(ix) +
           static_cast<std::size_t>(axes_[0].count) * static_cast<std::size_t>(iy);
  }
  std::array<int, 2> coords_of(std::size_t id) const {
    const int nx = axes_[0].count;
    return {static_cast<int>(id % nx), static_cast<int>(id / nx)};
  }
  double coordinate(int axis, int i) const {
    return axes_[axis].origin + i * spacing_[axis];
  }
  std::array<double, 2> position(std::size_t id) const {
    const auto c = coords_of(id);
    return {coordinate(0, c[0]), dim_ > 1 ? coordinate(1, c[1]) : 0.0};
  }

  bool interior(std::size_t id) const;
  bool boundary(std::size_t id) const { return !interior(id); }

  /// Trapezoid cell measure of (M, g): prod(h_i) * sqrt(det g) * boundary
  /// half-weights. Sums to the box/torus volume exactly.
  double cell_weight(std::size_t id) const;

  /// Neighbor along +/- axis; wraps on tori. `exists` is false past a
  /// bounded edge.
  std::size_t neighbor(std::size_t id, int axis, int step, bool& exists) const;

  bool operator==(const FiberGrid&) const = default;

 private:
  int dim_ = 0;
  Topology topology_ = Topology::Periodic;
  BoundaryPolicy policy_ = BoundaryPolicy::Dirichlet;
  std::array<GridAxis, 2> axes_{};
  std::array<double, 2> spacing_{1.0, 1.0};
  std::array<double, 2> metric_{1.0, 1.0};
  std::size_t nodes_ = 0;
};

/// One real value per grid node.
struct ScalarField {
  FiberGrid grid;
  std::vector<double> values;

  ScalarField() = default;
  explicit ScalarField(const FiberGrid& g)
      : grid(g), values(g.node_count(), 0.0) {}

  static ScalarField sample(const FiberGrid& g,
                            const std::function<double(double, double)>& fn);

  std::size_t size() const { return values.size(); }
  double& operator[](std::size_t i) { return values[i]; }
  double operator[](std::size_t i) const { return values[i]; }

  double min() const;
  double max() const;
  double mean() const;
  double stddev() const;
  double max_abs() const;
};

/// dim() real components per node (chart/coordinate components), stored as
/// component-major planes.
struct VectorField {
  FiberGrid grid;
  std::vector<double> comps;

  VectorField() = default;
  explicit VectorField(const FiberGrid& g)
      : grid(g), comps(g.node_count() * g.dim(), 0.0) {}

  double& at(int comp, std::size_t node) {
    return comps[static_cast<std::size_t>(comp) * grid.node_count() + node];
  }
  double at(int comp, std::size_t node) const {
    return comps[static_cast<std::size_t>(comp) * grid.node_count() + node];
  }
};

}  // namespace warpgraph
