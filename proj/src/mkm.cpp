#include "rbf/mkm.hpp"

#include <cmath>

namespace rbf {

namespace {

// Column-basis evaluation shared by assembly, solution evaluation, and the
// direct scheme. Functional: 0 = value at x, 1 = d/dn at x, 2 = L at x.
struct Assembler {
  const KernelEntries& entries;
  MkmVariant variant;

  double beta_d_col(int functional, Point2 x, Point2 s, Vec2 nx) const {
    switch (functional) {
      case 0: return entries.value(x, s);
      case 1: return entries.d_field(x, s, nx);
      default: return entries.op_field(x, s);
    }
  }

  double beta_n_col(int functional, Point2 x, Point2 s, Vec2 nx, Vec2 ns) const {
    const double sign = variant == MkmVariant::zhang_unsymmetric ? -1.0 : 1.0;
    switch (functional) {
      case 0: return sign * entries.d_source(x, s, ns);
      case 1: return sign * entries.d_mixed(x, s, nx, ns);
      default: return sign * entries.op_of_d_source(x, s, ns);
    }
  }

  double alpha_col(int functional, Point2 x, Point2 s, Vec2 nx) const {
    if (variant == MkmVariant::zhang_unsymmetric)
      return beta_d_col(functional, x, s, nx);
    switch (functional) {
      case 0: return entries.op_source(x, s);
      case 1: return entries.dn_op_source(x, s, nx);
      default: return entries.op_op(x, s);
    }
  }
};

void check_kernel(const Kernel& kernel) {
  if (!kernel.radial_finite_at_zero(4))
    throw ValidationError(
        "kernel too rough: operator-operator block singular at r=0");
}

}  // namespace

Kernel default_mkm_kernel() { return Kernel::tps(3); }

MkmAssembly mkm_assemble(const ProblemSpec& problem, const NodeSet& nodes,
                         const Kernel& kernel, MkmVariant variant) {
  check_kernel(kernel);
  const KernelEntries entries(problem.op, kernel);
  const Assembler assembler{entries, variant};

  const int l = nodes.boundary_count();
  const int ld = nodes.dirichlet_count();
  const auto all = nodes.all_positions();
  const int total = static_cast<int>(all.size());
  const int dim = l + total;  // N + 2L

  MkmAssembly out;
  out.matrix.resize(dim, dim);
  out.rhs.resize(dim);

  // Row functionals: boundary rows first (value at Dirichlet nodes, normal
  // derivative at Neumann nodes), then operator rows at every node.
  for (int row = 0; row < dim; ++row) {
    int functional;
    Point2 x;
    Vec2 nx{0.0, 0.0};
    if (row < l) {
      const auto& node = nodes.boundary[row];
      functional = node.bc == BcKind::dirichlet ? 0 : 1;
      x = node.position;
      nx = node.normal;
      out.rhs[row] = node.bc_value;
    } else {
      functional = 2;
      x = all[row - l];
      out.rhs[row] = problem.source_at(x);
    }

    for (int k = 0; k < ld; ++k)
      out.matrix(row, k) = assembler.beta_d_col(
          functional, x, nodes.boundary[k].position, nx);
    for (int k = ld; k < l; ++k)
      out.matrix(row, k) = assembler.beta_n_col(
          functional, x, nodes.boundary[k].position, nx,
          nodes.boundary[k].normal);
    for (int k = 0; k < total; ++k)
      out.matrix(row, l + k) = assembler.alpha_col(functional, x, all[k], nx);
  }
  return out;
}

MkmSolution mkm_solve(const ProblemSpec& problem, const NodeSet& nodes,
                      const Kernel& kernel, MkmVariant variant) {
  MkmAssembly assembly = mkm_assemble(problem, nodes, kernel, variant);
  SolveReport report = solve_dense(assembly.matrix, assembly.rhs);

  MkmSolution sol;
  sol.variant = variant;
  sol.op = problem.op;
  sol.kernel = kernel;
  sol.nodes = nodes;
  const int l = nodes.boundary_count();
  sol.beta = report.solution.col(0).head(l);
  sol.alpha = report.solution.col(0).tail(report.solution.rows() - l);
  sol.symmetry_defect = symmetry_defect(assembly.matrix);
  sol.condition = report.condition;
  sol.residual = report.residual_norm;
  return sol;
}

namespace {

double evaluate_functional(const MkmSolution& sol, int functional, Point2 x,
                           Vec2 nx) {
  const KernelEntries entries(sol.op, sol.kernel);
  const Assembler assembler{entries, sol.variant};
  const int l = sol.nodes.boundary_count();
  const int ld = sol.nodes.dirichlet_count();
  const auto all = sol.nodes.all_positions();
  double sum = 0.0;
  for (int k = 0; k < ld; ++k)
    sum += sol.beta[k] * assembler.beta_d_col(functional, x,
                                              sol.nodes.boundary[k].position,
                                              nx);
  for (int k = ld; k < l; ++k)
    sum += sol.beta[k] * assembler.beta_n_col(functional, x,
                                              sol.nodes.boundary[k].position,
                                              nx, sol.nodes.boundary[k].normal);
  for (std::size_t k = 0; k < all.size(); ++k)
    sum += sol.alpha[k] * assembler.alpha_col(functional, x, all[k], nx);
  return sum;
}

}  // namespace

double mkm_evaluate(const MkmSolution& sol, Point2 x) {
  return evaluate_functional(sol, 0, x, {0.0, 0.0});
}

std::pair<double, double> mkm_evaluate(const MkmSolution& sol, Point2 x,
                                       Vec2 n) {
  return {evaluate_functional(sol, 0, x, {0.0, 0.0}),
          evaluate_functional(sol, 1, x, n)};
}

DirectNodalField mkm_solve_direct(const ProblemSpec& problem,
                                  const NodeSet& nodes, const Kernel& kernel) {
  MkmAssembly assembly =
      mkm_assemble(problem, nodes, kernel, MkmVariant::symmetric);
  SolveReport report = solve_dense(assembly.matrix, assembly.rhs);
  const Vector coeff = report.solution.col(0);

  const KernelEntries entries(problem.op, kernel);
  const Assembler assembler{entries, MkmVariant::symmetric};
  const int l = nodes.boundary_count();
  const int ld = nodes.dirichlet_count();
  const auto all = nodes.all_positions();
  const int total = static_cast<int>(all.size());

  // Trace map: value rows at every node, then normal-derivative rows at the
  // boundary nodes.
  Matrix b(total + l, l + total);
  for (int row = 0; row < total + l; ++row) {
    int functional;
    Point2 x;
    Vec2 nx{0.0, 0.0};
    if (row < total) {
      functional = 0;
      x = all[row];
    } else {
      functional = 1;
      const auto& node = nodes.boundary[row - total];
      x = node.position;
      nx = node.normal;
    }
    for (int k = 0; k < ld; ++k)
      b(row, k) =
          assembler.beta_d_col(functional, x, nodes.boundary[k].position, nx);
    for (int k = ld; k < l; ++k)
      b(row, k) = assembler.beta_n_col(functional, x,
                                       nodes.boundary[k].position, nx,
                                       nodes.boundary[k].normal);
    for (int k = 0; k < total; ++k)
      b(row, l + k) = assembler.alpha_col(functional, x, all[k], nx);
  }

  Vector traces = b * coeff;
  DirectNodalField field;
  field.u = traces.head(total);
  field.q = traces.tail(l);
  return field;
}

}  // namespace rbf
