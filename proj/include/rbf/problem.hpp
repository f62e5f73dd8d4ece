#pragma once

#include <functional>
#include <vector>

#include "rbf/geometry.hpp"
#include "rbf/kernels.hpp"

namespace rbf {

/// One boundary-value problem instance: operator, domain, boundary data,
/// source term with its pre-supplied operator iterates (iterates[j] is L
/// applied j times to f; iterates[0] is f itself), and optionally the exact
/// solution for verification.
struct ProblemSpec {
  OperatorSpec op = OperatorSpec::laplace();
  Domain domain = Domain::circle({0, 0}, 1.0);
  std::function<double(Point2)> dirichlet_data = [](Point2) { return 0.0; };
  std::function<double(Point2, Vec2)> neumann_data = [](Point2, Vec2) { return 0.0; };
  std::vector<std::function<double(Point2)>> source_iterates;
  std::function<double(Point2)> exact;        // null when unknown
  std::function<Vec2(Point2)> exact_gradient;  // null when unknown

  bool has_source() const { return !source_iterates.empty(); }
  double source_at(Point2 p) const {
    return has_source() ? source_iterates[0](p) : 0.0;
  }
  /// L applied `count` times to f; zero beyond the supplied list only when
  /// the caller knows the iterates vanish.
  double iterate_at(int count, Point2 p) const {
    if (!has_source() || count >= static_cast<int>(source_iterates.size()))
      return 0.0;
    return source_iterates[count](p);
  }

  BoundaryData boundary_data() const {
    return BoundaryData{dirichlet_data, neumann_data};
  }
};

}  // namespace rbf
