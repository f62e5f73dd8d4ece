#include "rbf/bkm.hpp"

#include <cmath>

namespace rbf {

namespace {

// Homogenized boundary data: prescribed value minus the particular-solution
// trace.
struct HomogenizedData {
  Vector dirichlet;  // at the Dirichlet nodes
  Vector neumann;    // at the Neumann nodes
};

std::optional<DrmFit> fit_particular(const ProblemSpec& problem,
                                     const NodeSet& nodes) {
  if (!problem.has_source()) return std::nullopt;
  const auto centers = nodes.all_positions();
  Vector f(centers.size());
  for (std::size_t i = 0; i < centers.size(); ++i)
    f[i] = problem.source_at(centers[i]);
  return drm_fit(problem.op, default_particular_kernel(problem.op), nodes, f);
}

HomogenizedData homogenize(const ProblemSpec& problem, const NodeSet& nodes,
                           const std::optional<DrmFit>& particular) {
  HomogenizedData data;
  data.dirichlet.resize(nodes.dirichlet_count());
  data.neumann.resize(nodes.neumann_count());
  int di = 0, ni = 0;
  for (const auto& b : nodes.boundary) {
    if (b.bc == BcKind::dirichlet) {
      double v = b.bc_value;
      if (particular) v -= drm_evaluate(*particular, b.position);
      data.dirichlet[di++] = v;
    } else {
      double v = b.bc_value;
      if (particular) v -= drm_evaluate(*particular, b.position, b.normal).second;
      data.neumann[ni++] = v;
    }
  }
  return data;
}

double expansion_value(const Kernel& kernel,
                       const std::vector<BoundaryNode>& sources, int ld,
                       const Vector& coeff, bool hermite, Point2 x) {
  double sum = 0.0;
  for (std::size_t k = 0; k < sources.size(); ++k) {
    const auto& src = sources[k];
    if (!hermite || static_cast<int>(k) < ld) {
      sum += coeff[k] * kernel.value(x, src.position);
    } else {
      const auto bundle =
          normal_derivatives(kernel, x, src.position, {1, 0}, src.normal);
      sum += coeff[k] * bundle.d_source;
    }
  }
  return sum;
}

double expansion_normal(const Kernel& kernel,
                        const std::vector<BoundaryNode>& sources, int ld,
                        const Vector& coeff, bool hermite, Point2 x, Vec2 n) {
  double sum = 0.0;
  for (std::size_t k = 0; k < sources.size(); ++k) {
    const auto& src = sources[k];
    const auto bundle =
        normal_derivatives(kernel, x, src.position, n, src.normal);
    if (!hermite || static_cast<int>(k) < ld)
      sum += coeff[k] * bundle.d_field;
    else
      sum += coeff[k] * bundle.d_mixed;
  }
  return sum;
}

void finalize(BkmSolution& sol, const ProblemSpec& problem) {
  // Interior values are pure post-processing of the boundary solve.
  sol.interior_values.clear();
  for (const auto& p : sol.nodes.interior)
    sol.interior_values.push_back(bkm_evaluate(sol, p));
  double residual = 0.0;
  for (const auto& b : sol.nodes.boundary) {
    const double actual = b.bc == BcKind::dirichlet
                              ? bkm_evaluate(sol, b.position)
                              : bkm_evaluate_normal(sol, b.position, b.normal);
    residual = std::max(residual, std::abs(actual - b.bc_value));
  }
  sol.boundary_residual = residual;
  (void)problem;
}

}  // namespace

BkmSolution bkm_solve_indirect(const ProblemSpec& problem, const NodeSet& nodes) {
  BkmSolution sol;
  sol.variant = BkmVariant::indirect;
  sol.op = problem.op;
  sol.kernel = general_solution(problem.op, 0);
  sol.nodes = nodes;
  sol.particular = fit_particular(problem, nodes);

  const int l = nodes.boundary_count();
  const auto data = homogenize(problem, nodes, sol.particular);
  Matrix a(l, l);
  Vector rhs(l);
  int di = 0, ni = 0;
  for (int i = 0; i < l; ++i) {
    const auto& row = nodes.boundary[i];
    for (int k = 0; k < l; ++k) {
      const auto& src = nodes.boundary[k];
      if (row.bc == BcKind::dirichlet) {
        a(i, k) = sol.kernel.value(row.position, src.position);
      } else {
        a(i, k) = normal_derivatives(sol.kernel, row.position, src.position,
                                     row.normal, src.normal)
                      .d_field;
      }
    }
    rhs[i] = row.bc == BcKind::dirichlet ? data.dirichlet[di++]
                                         : data.neumann[ni++];
  }

  SolveReport report = solve_dense(a, rhs);
  sol.coefficients = report.solution.col(0);
  sol.condition = report.condition;
  sol.symmetry_defect = symmetry_defect(a);
  finalize(sol, problem);
  return sol;
}

BkmSolution bkm_solve_symmetric(const ProblemSpec& problem, const NodeSet& nodes) {
  BkmSolution sol;
  sol.variant = BkmVariant::symmetric;
  sol.op = problem.op;
  sol.kernel = general_solution(problem.op, 0);
  sol.nodes = nodes;
  sol.particular = fit_particular(problem, nodes);

  const auto data = homogenize(problem, nodes, sol.particular);
  Matrix a = hermite_boundary_matrix(sol.kernel, nodes.boundary, nodes.boundary);
  Vector rhs(nodes.boundary_count());
  rhs << data.dirichlet, data.neumann;

  SolveReport report = solve_dense(a, rhs);
  sol.coefficients = report.solution.col(0);
  sol.condition = report.condition;
  sol.symmetry_defect = symmetry_defect(a);
  finalize(sol, problem);
  return sol;
}

std::pair<DirectBoundaryData, BkmSolution> bkm_solve_direct(
    const ProblemSpec& problem, const NodeSet& nodes) {
  BkmSolution sol;
  sol.variant = BkmVariant::direct;
  sol.op = problem.op;
  sol.kernel = general_solution(problem.op, 0);
  sol.nodes = nodes;
  sol.particular = fit_particular(problem, nodes);

  const int l = nodes.boundary_count();
  const int ld = nodes.dirichlet_count();
  const auto data = homogenize(problem, nodes, sol.particular);

  Matrix a = hermite_boundary_matrix(sol.kernel, nodes.boundary, nodes.boundary);
  Vector rhs(l);
  rhs << data.dirichlet, data.neumann;
  SolveReport report = solve_dense(a, rhs);
  sol.coefficients = report.solution.col(0);
  sol.condition = report.condition;
  sol.symmetry_defect = symmetry_defect(a);

  // Complementary-trace map: Neumann traces at the Dirichlet nodes, value
  // traces at the Neumann nodes.
  Matrix b(l, l);
  for (int i = 0; i < l; ++i) {
    const auto& row = nodes.boundary[i];
    for (int k = 0; k < l; ++k) {
      const auto& src = nodes.boundary[k];
      const auto bundle = normal_derivatives(sol.kernel, row.position,
                                             src.position, row.normal,
                                             src.normal);
      const bool src_dirichlet = k < ld;
      if (row.bc == BcKind::dirichlet)
        b(i, k) = src_dirichlet ? bundle.d_field : bundle.d_mixed;
      else
        b(i, k) = src_dirichlet ? sol.kernel.value(row.position, src.position)
                                : bundle.d_source;
    }
  }
  Vector complementary = b * sol.coefficients;

  DirectBoundaryData traces;
  traces.prescribed_dirichlet.resize(ld);
  traces.prescribed_neumann.resize(l - ld);
  traces.recovered_neumann.resize(ld);
  traces.recovered_dirichlet.resize(l - ld);
  int di = 0, ni = 0;
  for (int i = 0; i < l; ++i) {
    const auto& node = nodes.boundary[i];
    if (node.bc == BcKind::dirichlet) {
      traces.prescribed_dirichlet[di] = node.bc_value;
      double value = complementary[i];
      if (sol.particular)
        value += drm_evaluate(*sol.particular, node.position, node.normal).second;
      traces.recovered_neumann[di++] = value;
    } else {
      traces.prescribed_neumann[ni] = node.bc_value;
      double value = complementary[i];
      if (sol.particular) value += drm_evaluate(*sol.particular, node.position);
      traces.recovered_dirichlet[ni++] = value;
    }
  }

  finalize(sol, problem);
  return {traces, sol};
}

double bkm_evaluate(const BkmSolution& sol, Point2 x) {
  const bool hermite = sol.variant != BkmVariant::indirect;
  double value = expansion_value(sol.kernel, sol.nodes.boundary,
                                 sol.nodes.dirichlet_count(), sol.coefficients,
                                 hermite, x);
  if (sol.particular) value += drm_evaluate(*sol.particular, x);
  return value;
}

double bkm_evaluate_normal(const BkmSolution& sol, Point2 x, Vec2 n) {
  const bool hermite = sol.variant != BkmVariant::indirect;
  double value = expansion_normal(sol.kernel, sol.nodes.boundary,
                                  sol.nodes.dirichlet_count(), sol.coefficients,
                                  hermite, x, n);
  if (sol.particular) value += drm_evaluate(*sol.particular, x, n).second;
  return value;
}


Matrix hermite_boundary_matrix(const Kernel& kernel,
                               const std::vector<BoundaryNode>& rows,
                               const std::vector<BoundaryNode>& sources) {
  int ld = 0;
  for (const auto& s : sources)
    if (s.bc == BcKind::dirichlet) ++ld;
  Matrix a(rows.size(), sources.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& row = rows[i];
    for (std::size_t k = 0; k < sources.size(); ++k) {
      const auto& src = sources[k];
      const auto bundle = normal_derivatives(kernel, row.position, src.position,
                                             row.normal, src.normal);
      const bool src_dirichlet = static_cast<int>(k) < ld;
      if (row.bc == BcKind::dirichlet)
        a(i, k) = src_dirichlet ? kernel.value(row.position, src.position)
                                : bundle.d_source;
      else
        a(i, k) = src_dirichlet ? bundle.d_field : bundle.d_mixed;
    }
  }
  return a;
}

double hermite_expansion_value(const Kernel& kernel,
                               const std::vector<BoundaryNode>& sources,
                               const Vector& coeff, Point2 x) {
  int ld = 0;
  for (const auto& s : sources)
    if (s.bc == BcKind::dirichlet) ++ld;
  return expansion_value(kernel, sources, ld, coeff, true, x);
}

double hermite_expansion_normal(const Kernel& kernel,
                                const std::vector<BoundaryNode>& sources,
                                const Vector& coeff, Point2 x, Vec2 n) {
  int ld = 0;
  for (const auto& s : sources)
    if (s.bc == BcKind::dirichlet) ++ld;
  return expansion_normal(kernel, sources, ld, coeff, true, x, n);
}

}  // namespace rbf
