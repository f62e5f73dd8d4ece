#pragma once

// Finite-difference oracles used to verify every analytic derivative chain.
// These stay independent of the profile machinery under test: they only call
// value-evaluation entry points.

#include <cmath>
#include <functional>

#include "rbf/geometry.hpp"
#include "rbf/kernels.hpp"

namespace oracle {

using Fn1 = std::function<double(double)>;
using Fn2 = std::function<double(rbf::Point2)>;

inline double d1(const Fn1& f, double x, double h) {
  return (f(x + h) - f(x - h)) / (2 * h);
}

inline double d2(const Fn1& f, double x, double h) {
  return (f(x + h) - 2 * f(x) + f(x - h)) / (h * h);
}

inline double d3(const Fn1& f, double x, double h) {
  return (f(x + 2 * h) - 2 * f(x + h) + 2 * f(x - h) - f(x - 2 * h)) /
         (2 * h * h * h);
}

inline double d4(const Fn1& f, double x, double h) {
  return (f(x + 2 * h) - 4 * f(x + h) + 6 * f(x) - 4 * f(x - h) +
          f(x - 2 * h)) /
         (h * h * h * h);
}

inline double directional(const Fn2& f, rbf::Point2 p, rbf::Vec2 dir, double h) {
  return (f({p.x + h * dir.x, p.y + h * dir.y}) -
          f({p.x - h * dir.x, p.y - h * dir.y})) /
         (2 * h);
}

inline double laplacian(const Fn2& f, rbf::Point2 p, double h) {
  return (f({p.x + h, p.y}) + f({p.x - h, p.y}) + f({p.x, p.y + h}) +
          f({p.x, p.y - h}) - 4 * f(p)) /
         (h * h);
}

/// FD application of a constant-coefficient operator or the variable
/// Helmholtz operator at the field point.
inline double apply_operator(const rbf::OperatorSpec& op, const Fn2& f,
                             rbf::Point2 p, double h) {
  using Kind = rbf::OperatorSpec::Kind;
  const double lap = laplacian(f, p, h);
  switch (op.kind()) {
    case Kind::laplace:
      return lap;
    case Kind::helmholtz:
      return lap + op.lambda() * op.lambda() * f(p);
    case Kind::modified_helmholtz:
      return lap - op.lambda() * op.lambda() * f(p);
    case Kind::convection_diffusion: {
      const auto cf = op.coefficient_form();
      const double fx = directional(f, p, {1, 0}, h);
      const double fy = directional(f, p, {0, 1}, h);
      return cf.d * lap - cf.v.x * fx - cf.v.y * fy - cf.k * f(p);
    }
    case Kind::variable_helmholtz:
      return lap + op.field().value(p) * f(p);
  }
  return 0.0;
}

inline double rel_error(double got, double want, double floor = 1.0) {
  return std::abs(got - want) / std::max(std::abs(want), floor);
}

}  // namespace oracle
