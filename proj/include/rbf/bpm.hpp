#pragma once

#include <optional>

#include "rbf/bkm.hpp"
#include "rbf/linalg.hpp"
#include "rbf/particular.hpp"
#include "rbf/problem.hpp"

namespace rbf {

enum class BpmVariant {
  bpm1,  // singular fundamental-solution ladder on a fictitious boundary
  bpm2,  // nonsingular general-solution ladder on the physical boundary
};

struct FictitiousBoundary {
  std::vector<Point2> sources;
  double inflation = 0.0;
};

/// Similar curve scaled about the domain centroid carrying L equally spaced
/// exterior sources.
FictitiousBoundary fictitious_boundary(const Domain& domain, int L, double rho);

struct BpmOptions {
  double rho = 2.5;  // fictitious-boundary inflation (bpm1 only)
};

/// Multiple-reciprocity ladder solution. Orders M..1 share one factorized
/// collocation matrix; order 0 is the Hermite boundary-condition system.
struct BpmLadder {
  BpmVariant variant = BpmVariant::bpm2;
  OperatorSpec op = OperatorSpec::laplace();
  int truncation_order = 1;           // M
  std::vector<Kernel> ladder;         // u_n#, n = 0..M
  std::vector<BoundaryNode> boundary; // collocation nodes
  std::vector<BoundaryNode> sources;  // expansion sources (paired by index)
  std::vector<Vector> coefficients;   // lambda^n, n = 0..M; order 0 is (a;b)
  std::optional<DrmFit> tail;         // mixed-tail fit of u_p^M
  std::vector<Kernel> tail_iterates;  // L^j Phi, j = 0..M (with tail only)
  int q_factorizations = 0;           // factorizations used by the order loop
  double order0_symmetry_defect = 0.0;
  double q_condition = 0.0;
  double order0_condition = 0.0;
  double boundary_residual = 0.0;
};

/// Solves with the zero-tail truncation (Eq-style u_p^M = 0). Consumes only
/// boundary nodes.
BpmLadder bpm_solve(const ProblemSpec& problem,
                    const std::vector<BoundaryNode>& boundary, int M,
                    BpmVariant variant, const BpmOptions& options = {});

/// Mixed strategy: the truncated tail u_p^M is replaced by a dual-
/// reciprocity fit of the (M-1)-th source iterate; interior nodes are
/// permitted here only.
BpmLadder bpm_mixed_tail(const ProblemSpec& problem,
                         const std::vector<BoundaryNode>& boundary,
                         const std::vector<Point2>& interior, int M,
                         BpmVariant variant, const BpmOptions& options = {});

double bpm_evaluate(const BpmLadder& ladder, Point2 x);
double bpm_evaluate_normal(const BpmLadder& ladder, Point2 x, Vec2 n);

}  // namespace rbf
