#pragma once

#include "rbf/linalg.hpp"
#include "rbf/problem.hpp"

namespace rbf {

enum class MkmVariant { symmetric, zhang_unsymmetric };

/// Domain collocation with double boundary interpolation: the system couples
/// beta sources (value / normal-derivative) at the L boundary nodes with
/// adjoint-operator sources at all L+N nodes, dimension N + 2L.
struct MkmSolution {
  MkmVariant variant = MkmVariant::symmetric;
  OperatorSpec op = OperatorSpec::laplace();
  Kernel kernel = Kernel::tps(3);
  NodeSet nodes;
  Vector beta;   // length L, Dirichlet block then Neumann block
  Vector alpha;  // length L+N
  double symmetry_defect = 0.0;
  double condition = 0.0;
  double residual = 0.0;  // max collocation residual at the nodes
};

struct MkmAssembly {
  Matrix matrix;
  Vector rhs;
};

/// Rows: [L_d Dirichlet values; L_n Neumann values; L+N operator rows];
/// columns: [beta_d; beta_n; alpha]. The Zhang variant drops the adjoint
/// operator and the normal-derivative sign from the column bases.
MkmAssembly mkm_assemble(const ProblemSpec& problem, const NodeSet& nodes,
                         const Kernel& kernel, MkmVariant variant);

MkmSolution mkm_solve(const ProblemSpec& problem, const NodeSet& nodes,
                      const Kernel& kernel,
                      MkmVariant variant = MkmVariant::symmetric);

double mkm_evaluate(const MkmSolution& sol, Point2 x);
/// Value and directional derivative along n.
std::pair<double, double> mkm_evaluate(const MkmSolution& sol, Point2 x, Vec2 n);

/// Physical nodal values u at all L+N nodes and normal traces q at the L
/// boundary nodes, recovered without exposing expansion coefficients.
struct DirectNodalField {
  Vector u;
  Vector q;
};

DirectNodalField mkm_solve_direct(const ProblemSpec& problem,
                                  const NodeSet& nodes, const Kernel& kernel);

/// Default kernel for the domain-type schemes: smooth enough for the
/// operator-operator block at r = 0.
Kernel default_mkm_kernel();

}  // namespace rbf
