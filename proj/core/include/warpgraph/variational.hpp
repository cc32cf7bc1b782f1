#pragma once

#include <Eigen/SparseCore>
#include <cstddef>
#include <vector>

#include "warpgraph/grid.hpp"
#include "warpgraph/warp.hpp"

namespace warpgraph {

// Discrete graph-volume functional
//
//   V(u) = sum_j w_j f(u_j)^(n-1) sqrt(f(u_j)^2 + |Du|^2_j),
//
// with |Du|^2 averaged from squared half-point (staggered) differences, so
// the functional has no checkerboard blind spot and its exact gradient
// yields a compact second-order residual. The MS residual is the scaled
// gradient R = -(dV/du) / (w f(u)^n); zero residual and critical point
// coincide by construction.

/// Throws DomainError naming offending nodes if u leaves the domain of f.
void check_in_domain(const FiberGrid& grid, const WarpingFunction& f,
                     const ScalarField& u);

double discrete_volume(const FiberGrid& grid, const WarpingFunction& f,
                       const ScalarField& u);

/// Exact partial derivatives dV/du_k as a field over all nodes.
ScalarField discrete_volume_gradient(const FiberGrid& grid,
                                     const WarpingFunction& f,
                                     const ScalarField& u);

/// R(u) = -(dV/du) / (w f(u)^n). Sign pinned by slices:
/// R(u == t0) = -n f'(t0)/f(t0).
ScalarField discrete_ms_residual(const FiberGrid& grid,
                                 const WarpingFunction& f,
                                 const ScalarField& u);

/// Staggered |Du|^2 average per node (the gradient energy the volume sees).
ScalarField staggered_grad_sq(const FiberGrid& grid, const ScalarField& u);

/// Free unknowns of the discrete problem: every node on a torus, interior
/// nodes of a Dirichlet box.
struct FreeNodeMap {
  std::vector<std::size_t> free_to_node;
  std::vector<std::ptrdiff_t> node_to_free;  // -1 for held nodes
  std::size_t size() const { return free_to_node.size(); }
};

FreeNodeMap free_nodes(const FiberGrid& grid);

/// Exact Hessian of the discrete volume over the free nodes, assembled
/// element-wise from the analytic second derivatives of the density.
Eigen::SparseMatrix<double> volume_hessian(const FiberGrid& grid,
                                           const WarpingFunction& f,
                                           const ScalarField& u,
                                           const FreeNodeMap& map);

/// Exact Jacobian dR/du over the free nodes (analytic differentiation of
/// the residual stencil).
Eigen::SparseMatrix<double> residual_jacobian(const FiberGrid& grid,
                                              const WarpingFunction& f,
                                              const ScalarField& u,
                                              const FreeNodeMap& map);

}  // namespace warpgraph
