#include "rbf/bpm.hpp"

#include <cmath>

namespace rbf {

namespace {

Domain scale_about_centroid(const Domain& domain, double rho) {
  const Point2 c = domain.centroid();
  switch (domain.kind()) {
    case DomainKind::circle:
      return Domain::circle(c, rho * domain.radius());
    case DomainKind::ellipse:
      return Domain::ellipse(c, rho * domain.semi_axis_a(),
                             rho * domain.semi_axis_b());
    case DomainKind::rectangle:
      return Domain::rectangle(c + rho * (domain.lo() - c),
                               c + rho * (domain.hi() - c));
  }
  throw ValidationError("degenerate domain");
}

// Ladder kernels u_n#, n = 0..M, satisfying L{u_n#} = u_{n-1}#. The ladder
// identity is cross-checked at construction against the operator chains.
std::vector<Kernel> build_ladder(const ProblemSpec& problem, int order,
                                 BpmVariant variant) {
  std::vector<Kernel> ladder;
  for (int n = 0; n <= order; ++n) {
    if (variant == BpmVariant::bpm2) {
      ladder.push_back(general_solution(problem.op, n));
    } else {
      if (problem.op.kind() != OperatorSpec::Kind::laplace)
        throw ValidationError(
            "bpm1 requires the Laplace fundamental-solution ladder");
      ladder.push_back(Kernel::laplace_fundamental(n));
    }
  }
  for (int n = 1; n <= order; ++n) {
    for (double r : {0.4, 1.1, 2.3}) {
      const Point2 x{r, 0.0}, s{0.0, 0.0};
      const double lhs =
          apply_operator(problem.op, ladder[n], x, s, OperatorSide::field);
      const double rhs = ladder[n - 1].radial(r, 0);
      if (std::abs(lhs - rhs) > 1e-8 * (1.0 + std::abs(rhs)))
        throw NumericalError("kernel ladder verification failed");
    }
  }
  return ladder;
}

struct Tail {
  DrmFit fit;
  std::vector<Kernel> iterates;  // L^j Phi, j = 0..M
};

// Dual-reciprocity fit of the (M-1)-th iterate of f under M applications of
// the operator, over boundary plus interior centers.
Tail build_tail(const ProblemSpec& problem,
                const std::vector<BoundaryNode>& boundary,
                const std::vector<Point2>& interior, int order) {
  const Kernel phi = default_particular_kernel(problem.op);
  std::vector<Kernel> iterates{phi};
  for (int j = 1; j <= order; ++j)
    iterates.push_back(apply_radial_operator(problem.op, iterates.back()));

  NodeSet centers = NodeSet::create(boundary, interior);
  const auto pts = centers.all_positions();
  const int n = static_cast<int>(pts.size());
  Matrix a(n, n);
  Vector g(n);
  const Kernel& basis = iterates[order];
  for (int i = 0; i < n; ++i) {
    g[i] = problem.iterate_at(order - 1, pts[i]);
    for (int j = 0; j < n; ++j)
      a(i, j) = basis.value(pts[i], pts[j]);
  }
  SolveReport report = solve_dense(a, g);

  Tail tail;
  tail.fit.op = problem.op;
  tail.fit.phi = phi;
  tail.fit.centers = pts;
  tail.fit.coefficients = report.solution.col(0);
  tail.fit.fit_residual = (a * tail.fit.coefficients - g).cwiseAbs().maxCoeff();
  tail.iterates = std::move(iterates);
  return tail;
}

// L^j{u_p^M} at x through the exact kernel iterates.
double tail_iterate_value(const BpmLadder& ladder, int applications, Point2 x) {
  if (!ladder.tail) return 0.0;
  const Kernel& kernel = ladder.tail_iterates[applications];
  double sum = 0.0;
  for (std::size_t l = 0; l < ladder.tail->centers.size(); ++l)
    sum += ladder.tail->coefficients[l] * kernel.value(x, ladder.tail->centers[l]);
  return sum;
}

double tail_iterate_normal(const BpmLadder& ladder, int applications, Point2 x,
                           Vec2 n) {
  if (!ladder.tail) return 0.0;
  const Kernel& kernel = ladder.tail_iterates[applications];
  double sum = 0.0;
  for (std::size_t l = 0; l < ladder.tail->centers.size(); ++l) {
    const auto bundle =
        normal_derivatives(kernel, x, ladder.tail->centers[l], n, n);
    sum += ladder.tail->coefficients[l] * bundle.d_field;
  }
  return sum;
}

BpmLadder solve_impl(const ProblemSpec& problem,
                     const std::vector<BoundaryNode>& boundary, int order,
                     BpmVariant variant, const BpmOptions& options,
                     std::optional<Tail> tail) {
  if (order < 1) throw ValidationError("truncation order must be at least 1");
  if (boundary.empty()) throw ValidationError("bpm requires boundary nodes");

  BpmLadder ladder;
  ladder.variant = variant;
  ladder.op = problem.op;
  ladder.truncation_order = order;
  ladder.boundary = boundary;
  ladder.ladder = build_ladder(problem, order, variant);
  if (tail) {
    ladder.tail = std::move(tail->fit);
    ladder.tail_iterates = std::move(tail->iterates);
  }

  // Expansion sources: the boundary itself (bpm2) or the inflated copy
  // (bpm1), paired with the boundary nodes by parameter position.
  if (variant == BpmVariant::bpm2) {
    ladder.sources = boundary;
  } else {
    const Domain scaled = scale_about_centroid(problem.domain, options.rho);
    BoundaryData zero;
    auto nodes = generate_boundary_nodes(scaled,
                                         static_cast<int>(boundary.size()), 1.0,
                                         zero);
    for (std::size_t k = 0; k < nodes.size(); ++k) {
      nodes[k].bc = boundary[k].bc;
      if (problem.domain.contains(nodes[k].position))
        throw ValidationError("fictitious source inside the domain");
    }
    ladder.sources = std::move(nodes);
  }

  const int l = static_cast<int>(boundary.size());
  const int m = order;
  ladder.coefficients.assign(m + 1, Vector::Zero(l));

  // Orders M..1: one shared value-collocation matrix. After n applications
  // of L every ladder kernel above n collapses onto u_0#, so the matrix is
  // the same for every order and is factorized once.
  Matrix q(l, l);
  for (int i = 0; i < l; ++i)
    for (int k = 0; k < l; ++k)
      q(i, k) = ladder.ladder[0].value(boundary[i].position,
                                       ladder.sources[k].position);
  DenseFactorization q_fact(std::move(q));
  ladder.q_factorizations = 1;
  ladder.q_condition = q_fact.condition();

  for (int n = m; n >= 1; --n) {
    Vector b(l);
    for (int i = 0; i < l; ++i) {
      const Point2 xi = boundary[i].position;
      double value = problem.iterate_at(n - 1, xi);
      // Already-solved higher orders contribute through the collapsed ladder.
      for (int mm = n + 1; mm <= m; ++mm) {
        const Kernel& collapsed = ladder.ladder[mm - n];
        double sum = 0.0;
        for (int k = 0; k < l; ++k)
          sum += ladder.coefficients[mm][k] *
                 collapsed.value(xi, ladder.sources[k].position);
        value -= sum;
      }
      value -= tail_iterate_value(ladder, n, xi);
      b[i] = value;
    }
    ladder.coefficients[n] = q_fact.solve(b);
  }

  // Order 0: the boundary-condition system with Hermite blocks, with the
  // assembled particular solution u_p^0 moved to the right-hand side.
  Matrix a = hermite_boundary_matrix(ladder.ladder[0], boundary, ladder.sources);
  ladder.order0_symmetry_defect = symmetry_defect(a);
  Vector rhs(l);
  for (int i = 0; i < l; ++i) {
    const auto& node = boundary[i];
    double up0 = tail_iterate_value(ladder, 0, node.position);
    double dup0 = ladder.tail ? tail_iterate_normal(ladder, 0, node.position,
                                                    node.normal)
                              : 0.0;
    for (int n = 1; n <= m; ++n) {
      const Kernel& kn = ladder.ladder[n];
      for (int k = 0; k < l; ++k) {
        const double c = ladder.coefficients[n][k];
        if (c == 0.0) continue;
        if (node.bc == BcKind::dirichlet) {
          up0 += c * kn.value(node.position, ladder.sources[k].position);
        } else {
          dup0 += c * normal_derivatives(kn, node.position,
                                         ladder.sources[k].position,
                                         node.normal, node.normal)
                          .d_field;
        }
      }
    }
    rhs[i] = node.bc == BcKind::dirichlet ? node.bc_value - up0
                                          : node.bc_value - dup0;
  }
  SolveReport report = solve_dense(a, rhs);
  ladder.coefficients[0] = report.solution.col(0);
  ladder.order0_condition = report.condition;

  double residual = 0.0;
  for (const auto& node : boundary) {
    const double actual =
        node.bc == BcKind::dirichlet
            ? bpm_evaluate(ladder, node.position)
            : bpm_evaluate_normal(ladder, node.position, node.normal);
    residual = std::max(residual, std::abs(actual - node.bc_value));
  }
  ladder.boundary_residual = residual;
  return ladder;
}

}  // namespace

FictitiousBoundary fictitious_boundary(const Domain& domain, int L, double rho) {
  if (!(rho > 1.0)) throw ValidationError("inflation ratio must exceed 1");
  const Domain scaled = scale_about_centroid(domain, rho);
  BoundaryData zero;
  FictitiousBoundary out;
  out.inflation = rho;
  for (const auto& node : generate_boundary_nodes(scaled, L, 1.0, zero))
    out.sources.push_back(node.position);
  return out;
}

BpmLadder bpm_solve(const ProblemSpec& problem,
                    const std::vector<BoundaryNode>& boundary, int M,
                    BpmVariant variant, const BpmOptions& options) {
  return solve_impl(problem, boundary, M, variant, options, std::nullopt);
}

BpmLadder bpm_mixed_tail(const ProblemSpec& problem,
                         const std::vector<BoundaryNode>& boundary,
                         const std::vector<Point2>& interior, int M,
                         BpmVariant variant, const BpmOptions& options) {
  if (M < 2) throw ValidationError("mixed tail requires truncation order >= 2");
  Tail tail = build_tail(problem, boundary, interior, M);
  return solve_impl(problem, boundary, M, variant, options, std::move(tail));
}

double bpm_evaluate(const BpmLadder& ladder, Point2 x) {
  double sum = hermite_expansion_value(ladder.ladder[0], ladder.sources,
                                       ladder.coefficients[0], x);
  for (int n = 1; n <= ladder.truncation_order; ++n)
    for (std::size_t k = 0; k < ladder.sources.size(); ++k)
      sum += ladder.coefficients[n][k] *
             ladder.ladder[n].value(x, ladder.sources[k].position);
  sum += tail_iterate_value(ladder, 0, x);
  return sum;
}

double bpm_evaluate_normal(const BpmLadder& ladder, Point2 x, Vec2 n) {
  double sum = hermite_expansion_normal(ladder.ladder[0], ladder.sources,
                                        ladder.coefficients[0], x, n);
  for (int order = 1; order <= ladder.truncation_order; ++order)
    for (std::size_t k = 0; k < ladder.sources.size(); ++k)
      sum += ladder.coefficients[order][k] *
             normal_derivatives(ladder.ladder[order], x,
                                ladder.sources[k].position, n, n)
                 .d_field;
  sum += tail_iterate_normal(ladder, 0, x, n);
  return sum;
}

}  // namespace rbf
