#pragma once

#include <optional>

#include "rbf/geometry.hpp"
#include "rbf/kernels.hpp"
#include "rbf/linalg.hpp"

namespace rbf {

/// Dual-reciprocity particular solution: the source term is interpolated in
/// the operator image of the kernel Phi, so u_p = sum alpha_j Phi(r_j)
/// satisfies L{u_p} = f at every center.
struct DrmFit {
  OperatorSpec op = OperatorSpec::laplace();
  Kernel phi = Kernel::tps(3);
  std::vector<Point2> centers;
  Vector coefficients;
  double fit_residual = 0.0;  // max |L{u_p} - f| over the centers
  bool hermite = false;       // symmetric variant (basis L* Phi)
};

struct DrmOptions {
  bool hermite = false;
};

/// Default particular-solution kernel per operator family.
Kernel default_particular_kernel(const OperatorSpec& op);

/// f holds source samples at all N+L nodes, boundary block first.
DrmFit drm_fit(const OperatorSpec& op, const Kernel& phi, const NodeSet& nodes,
               const Vector& f, DrmOptions options = {});

double drm_evaluate(const DrmFit& fit, Point2 x);

/// Value and directional derivative along n.
std::pair<double, double> drm_evaluate(const DrmFit& fit, Point2 x, Vec2 n);

}  // namespace rbf
