#pragma once

#include <optional>
#include <utility>

#include "rbf/linalg.hpp"
#include "rbf/particular.hpp"
#include "rbf/problem.hpp"

namespace rbf {

enum class BkmVariant { indirect, symmetric, direct };

/// Boundary knot solution: homogeneous expansion coefficients on the
/// boundary sources plus the attached particular-solution fit.
struct BkmSolution {
  BkmVariant variant = BkmVariant::indirect;
  OperatorSpec op = OperatorSpec::laplace();
  Kernel kernel = Kernel::tps(1);  // replaced by the general solution
  NodeSet nodes;
  /// indirect: lambda (length L); symmetric/direct: (a_s; b_t).
  Vector coefficients;
  std::optional<DrmFit> particular;
  std::vector<double> interior_values;
  double boundary_residual = 0.0;  // max BC residual at the collocation nodes
  double symmetry_defect = 0.0;    // of the boundary matrix
  double condition = 0.0;
};

/// Prescribed and recovered boundary traces of the direct scheme. All four
/// blocks hold full (non-homogenized) values.
struct DirectBoundaryData {
  Vector prescribed_dirichlet;  // D_u, length L_d
  Vector prescribed_neumann;    // N_gamma, length L_n
  Vector recovered_neumann;     // N_u at the Dirichlet nodes
  Vector recovered_dirichlet;   // D_gamma at the Neumann nodes
};

BkmSolution bkm_solve_indirect(const ProblemSpec& problem, const NodeSet& nodes);
BkmSolution bkm_solve_symmetric(const ProblemSpec& problem, const NodeSet& nodes);
std::pair<DirectBoundaryData, BkmSolution> bkm_solve_direct(
    const ProblemSpec& problem, const NodeSet& nodes);

double bkm_evaluate(const BkmSolution& sol, Point2 x);
/// Directional derivative of the solution field along n.
double bkm_evaluate_normal(const BkmSolution& sol, Point2 x, Vec2 n);

/// Hermite boundary blocks shared by the symmetric/direct BKM and the
/// order-0 system of the boundary particle method: value rows at Dirichlet
/// nodes and normal-derivative rows at Neumann nodes, against value sources
/// at Dirichlet sources and normal-derivative sources at Neumann sources.
/// Sources must keep the Dirichlet block first.
Matrix hermite_boundary_matrix(const Kernel& kernel,
                               const std::vector<BoundaryNode>& rows,
                               const std::vector<BoundaryNode>& sources);

/// Value of the Hermite boundary expansion with coefficients (a_s; b_t).
double hermite_expansion_value(const Kernel& kernel,
                               const std::vector<BoundaryNode>& sources,
                               const Vector& coeff, Point2 x);
double hermite_expansion_normal(const Kernel& kernel,
                                const std::vector<BoundaryNode>& sources,
                                const Vector& coeff, Point2 x, Vec2 n);

}  // namespace rbf
