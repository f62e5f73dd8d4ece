#include "rbf/interp.hpp"

#include <cmath>
#include <limits>

namespace rbf {

HermiteInterpolant hermite_fit(const NodeSet& nodes, const Vector& u,
                               const Vector& q, const Kernel& kernel) {
  const int l = nodes.boundary_count();
  const auto all = nodes.all_positions();
  const int total = static_cast<int>(all.size());
  if (u.size() != total) throw ValidationError("value sample count mismatch");
  if (q.size() != l)
    throw ValidationError("normal-derivative sample count mismatch");

  // Value rows at every node, normal-derivative rows at the boundary nodes,
  // against value sources (alpha) and normal-derivative sources (beta).
  Matrix a(total + l, total + l);
  for (int row = 0; row < total + l; ++row) {
    const bool value_row = row < total;
    const Point2 x = value_row ? all[row] : nodes.boundary[row - total].position;
    const Vec2 nx =
        value_row ? Vec2{0.0, 0.0} : nodes.boundary[row - total].normal;
    for (int k = 0; k < total; ++k) {
      a(row, k) = value_row
                      ? kernel.value(x, all[k])
                      : normal_derivatives(kernel, x, all[k], nx, nx).d_field;
    }
    for (int t = 0; t < l; ++t) {
      const auto& src = nodes.boundary[t];
      const auto bundle =
          normal_derivatives(kernel, x, src.position, nx, src.normal);
      a(row, total + t) = value_row ? bundle.d_source : bundle.d_mixed;
    }
  }

  Vector rhs(total + l);
  rhs << u, q;
  SolveReport report = solve_dense(a, rhs);

  HermiteInterpolant out;
  out.kernel = kernel;
  out.nodes = nodes;
  out.alpha = report.solution.col(0).head(total);
  out.beta = report.solution.col(0).tail(l);
  out.matrix_symmetry_defect = symmetry_defect(a);
  return out;
}

double hermite_evaluate(const HermiteInterpolant& interp, Point2 x) {
  const auto all = interp.nodes.all_positions();
  double sum = 0.0;
  for (std::size_t k = 0; k < all.size(); ++k)
    sum += interp.alpha[k] * interp.kernel.value(x, all[k]);
  for (int t = 0; t < interp.nodes.boundary_count(); ++t) {
    const auto& src = interp.nodes.boundary[t];
    sum += interp.beta[t] * normal_derivatives(interp.kernel, x, src.position,
                                               src.normal, src.normal)
                                .d_source;
  }
  return sum;
}

PlainInterpolant plain_fit(const std::vector<Point2>& centers, const Vector& u,
                           const Kernel& kernel) {
  const auto& all = centers;
  const int total = static_cast<int>(all.size());
  if (u.size() != total) throw ValidationError("value sample count mismatch");
  Matrix a(total, total);
  for (int i = 0; i < total; ++i)
    for (int j = 0; j < total; ++j) a(i, j) = kernel.value(all[i], all[j]);
  SolveReport report = solve_dense(a, u);
  return PlainInterpolant{kernel, all, report.solution.col(0)};
}

double plain_evaluate(const PlainInterpolant& interp, Point2 x) {
  double sum = 0.0;
  for (std::size_t k = 0; k < interp.centers.size(); ++k)
    sum += interp.coefficients[k] * interp.kernel.value(x, interp.centers[k]);
  return sum;
}

double mean_node_spacing(const NodeSet& nodes) {
  const auto all = nodes.all_positions();
  double sum = 0.0;
  for (std::size_t i = 0; i < all.size(); ++i) {
    double nearest = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < all.size(); ++j)
      if (i != j) nearest = std::min(nearest, (all[i] - all[j]).norm());
    sum += nearest;
  }
  return sum / static_cast<double>(all.size());
}

std::vector<SmoothTestFunction> edge_test_suite() {
  std::vector<SmoothTestFunction> suite;

  SmoothTestFunction franke;
  franke.name = "franke";
  franke.value = [](Point2 p) {
    const double x = p.x, y = p.y;
    return 0.75 * std::exp(-(std::pow(9 * x - 2, 2) + std::pow(9 * y - 2, 2)) / 4.0) +
           0.75 * std::exp(-std::pow(9 * x + 1, 2) / 49.0 - (9 * y + 1) / 10.0) +
           0.5 * std::exp(-(std::pow(9 * x - 7, 2) + std::pow(9 * y - 3, 2)) / 4.0) -
           0.2 * std::exp(-std::pow(9 * x - 4, 2) - std::pow(9 * y - 7, 2));
  };
  franke.gradient = [](Point2 p) {
    const double x = p.x, y = p.y;
    const double t1 = 0.75 * std::exp(-(std::pow(9 * x - 2, 2) + std::pow(9 * y - 2, 2)) / 4.0);
    const double t2 = 0.75 * std::exp(-std::pow(9 * x + 1, 2) / 49.0 - (9 * y + 1) / 10.0);
    const double t3 = 0.5 * std::exp(-(std::pow(9 * x - 7, 2) + std::pow(9 * y - 3, 2)) / 4.0);
    const double t4 = -0.2 * std::exp(-std::pow(9 * x - 4, 2) - std::pow(9 * y - 7, 2));
    Vec2 g;
    g.x = t1 * (-4.5 * (9 * x - 2)) + t2 * (-18.0 * (9 * x + 1) / 49.0) +
          t3 * (-4.5 * (9 * x - 7)) + t4 * (-18.0 * (9 * x - 4));
    g.y = t1 * (-4.5 * (9 * y - 2)) + t2 * (-0.9) + t3 * (-4.5 * (9 * y - 3)) +
          t4 * (-18.0 * (9 * y - 7));
    return g;
  };
  suite.push_back(franke);

  SmoothTestFunction waves;
  waves.name = "waves";
  waves.value = [](Point2 p) {
    return std::sin(3 * p.x + p.y) + std::cos(p.x - 2 * p.y);
  };
  waves.gradient = [](Point2 p) {
    return Vec2{3 * std::cos(3 * p.x + p.y) + -std::sin(p.x - 2 * p.y),
                std::cos(3 * p.x + p.y) + 2 * std::sin(p.x - 2 * p.y)};
  };
  suite.push_back(waves);

  SmoothTestFunction bump;
  bump.name = "bump";
  bump.value = [](Point2 p) {
    const double dx = p.x - 0.3, dy = p.y - 0.7;
    return std::exp(-2.0 * (dx * dx + dy * dy));
  };
  bump.gradient = [](Point2 p) {
    const double dx = p.x - 0.3, dy = p.y - 0.7;
    const double v = std::exp(-2.0 * (dx * dx + dy * dy));
    return Vec2{-4.0 * dx * v, -4.0 * dy * v};
  };
  suite.push_back(bump);

  return suite;
}

EdgeErrorReport edge_error_report(const SmoothTestFunction& f,
                                  const Domain& domain, const NodeSet& nodes,
                                  const Kernel& kernel) {
  const auto all = nodes.all_positions();
  Vector u(all.size());
  for (std::size_t i = 0; i < all.size(); ++i) u[i] = f.value(all[i]);
  Vector q(nodes.boundary_count());
  for (int t = 0; t < nodes.boundary_count(); ++t) {
    const auto& b = nodes.boundary[t];
    q[t] = f.gradient(b.position).dot(b.normal);
  }

  const HermiteInterpolant hermite = hermite_fit(nodes, u, q, kernel);
  const PlainInterpolant plain = plain_fit(all, u, kernel);

  // Fixed 200-point sample of the boundary-adjacent band.
  const double band = 2.0 * mean_node_spacing(nodes);
  EdgeErrorReport report;
  double scale = 0.0;
  Point2 lo, hi;
  if (domain.kind() == DomainKind::rectangle) {
    lo = domain.lo();
    hi = domain.hi();
  } else {
    lo = {domain.centroid().x - domain.semi_axis_a(),
          domain.centroid().y - domain.semi_axis_b()};
    hi = {domain.centroid().x + domain.semi_axis_a(),
          domain.centroid().y + domain.semi_axis_b()};
  }
  for (int idx = 1; report.band_points < 200 && idx < 100000; ++idx) {
    Point2 p{lo.x + (hi.x - lo.x) * halton_value(idx, 2),
             lo.y + (hi.y - lo.y) * halton_value(idx, 3)};
    if (!domain.contains(p)) continue;
    if (domain.boundary_distance_lb(p) >= band) continue;
    ++report.band_points;
    const double exact = f.value(p);
    scale = std::max(scale, std::abs(exact));
    report.hermite_band_error = std::max(
        report.hermite_band_error, std::abs(hermite_evaluate(hermite, p) - exact));
    report.plain_band_error = std::max(
        report.plain_band_error, std::abs(plain_evaluate(plain, p) - exact));
  }

  // Degenerate case: both fits reproduce the data to rounding.
  const double floor_tol = 1e-10 * (1.0 + scale);
  if (report.hermite_band_error <= floor_tol && report.plain_band_error <= floor_tol)
    report.ratio = 1.0;
  else
    report.ratio = report.hermite_band_error /
                   std::max(report.plain_band_error,
                            std::numeric_limits<double>::min());
  return report;
}

}  // namespace rbf
