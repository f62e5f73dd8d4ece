#pragma once

#include "rbf/linalg.hpp"
#include "rbf/mkm.hpp"
#include "rbf/problem.hpp"

namespace rbf {

enum class Continuity { c0, c1 };

/// Node counts for every subregion of the partition.
struct SubregionNodeSpec {
  int per_edge = 3;    // nodes per cell-edge segment (half-offset, corners free)
  int interior_x = 2;  // interior grid per cell
  int interior_y = 2;
  double bc_split = 1.0;  // Dirichlet fraction of the physical perimeter
};

/// One collocation node of the partition with its owning subregions.
/// Pure interface nodes are shared by two cells (edge) or four (partition
/// corner); physical-boundary nodes have one owner and carry BC data.
struct FkmNode {
  Point2 position;
  std::vector<int> owners;  // ascending cell ids (row-major j*sx+i)
  bool physical = false;
  Vec2 normal{0.0, 0.0};            // outward domain normal (physical nodes)
  BcKind bc = BcKind::dirichlet;    // physical nodes
  Vec2 seam_normal{0.0, 0.0};       // interface nodes: flux-closure direction
};

struct Partition {
  Domain domain = Domain::rectangle({0, 0}, {1, 1});
  int sx = 1, sy = 1;
  std::vector<Domain> cells;  // row-major
  std::vector<FkmNode> nodes;
  std::vector<std::vector<int>> cell_nodes;     // all node ids per cell
  std::vector<std::vector<int>> cell_boundary;  // subregion-boundary ids per cell
  std::vector<std::vector<int>> cell_interior;  // cell-interior ids per cell
};

/// Tiles a rectangle into an sx-by-sy grid of subregions, generating shared
/// interface nodes once and registering them with every adjacent cell.
Partition partition_rectangle(const Domain& domain, int sx, int sy,
                              const SubregionNodeSpec& spec);

/// Equivalent flat node set (Dirichlet block first), used to compare a 1x1
/// partition against the plain domain scheme.
NodeSet partition_node_set(const Partition& partition);

struct FkmSolution {
  Continuity continuity = Continuity::c0;
  OperatorSpec op = OperatorSpec::laplace();
  Kernel kernel = Kernel::tps(3);
  Partition partition;
  Vector coefficients;
  /// Per-cell column descriptors: kind 0 = alpha (adjoint source), 1 = beta
  /// (value source), 2/3 = x/y derivative sources (C1 interface nodes).
  struct ColumnRef {
    int column;
    int node;
    int kind;
  };
  std::vector<std::vector<ColumnRef>> cell_columns;
  int dimension = 0;
  int nonzeros = 0;
  double condition = 0.0;
  double residual = 0.0;
};

FkmSolution fkm_solve(const ProblemSpec& problem, const Partition& partition,
                      Continuity continuity,
                      const Kernel& kernel = default_mkm_kernel());

/// Evaluates the owning subregion's local expansion (ties to the lowest cell
/// index).
double fkm_evaluate(const FkmSolution& sol, Point2 x);

/// Evaluation against one designated subregion's expansion; used to measure
/// interface mismatch between adjacent expansions.
double fkm_evaluate_in_cell(const FkmSolution& sol, int cell, Point2 x);
Vec2 fkm_gradient_in_cell(const FkmSolution& sol, int cell, Point2 x);

}  // namespace rbf
