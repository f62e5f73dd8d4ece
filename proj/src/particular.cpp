#include "rbf/particular.hpp"

namespace rbf {

Kernel default_particular_kernel(const OperatorSpec& op) {
  // TPS of power 1 links to the Laplace operator only; general second-order
  // operators get the smoother r^6 ln r.
  if (op.kind() == OperatorSpec::Kind::laplace)
    return Kernel::laplace_fundamental(2);
  return Kernel::tps(3);
}

DrmFit drm_fit(const OperatorSpec& op, const Kernel& phi, const NodeSet& nodes,
               const Vector& f, DrmOptions options) {
  const std::vector<Point2> centers = nodes.all_positions();
  const int n = static_cast<int>(centers.size());
  if (f.size() != n) throw ValidationError("source sample count mismatch");

  const KernelEntries entries(op, phi);
  const int fit_order = options.hermite ? 4 : 2;
  if (!phi.radial_finite_at_zero(fit_order))
    throw ValidationError("kernel/operator smoothness mismatch");

  Matrix a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      a(i, j) = options.hermite ? entries.op_op(centers[i], centers[j])
                                : entries.op_field(centers[i], centers[j]);

  SolveReport report = solve_dense(a, f);

  DrmFit fit;
  fit.op = op;
  fit.phi = phi;
  fit.centers = centers;
  fit.coefficients = report.solution.col(0);
  fit.hermite = options.hermite;
  fit.fit_residual = (a * fit.coefficients - f).cwiseAbs().maxCoeff();
  return fit;
}

double drm_evaluate(const DrmFit& fit, Point2 x) {
  const KernelEntries entries(fit.op, fit.phi);
  double sum = 0.0;
  for (int j = 0; j < fit.coefficients.size(); ++j)
    sum += fit.coefficients[j] *
           (fit.hermite ? entries.op_source(x, fit.centers[j])
                        : entries.value(x, fit.centers[j]));
  return sum;
}

std::pair<double, double> drm_evaluate(const DrmFit& fit, Point2 x, Vec2 n) {
  const KernelEntries entries(fit.op, fit.phi);
  double value = 0.0, deriv = 0.0;
  for (int j = 0; j < fit.coefficients.size(); ++j) {
    const double c = fit.coefficients[j];
    if (fit.hermite) {
      value += c * entries.op_source(x, fit.centers[j]);
      deriv += c * entries.dn_op_source(x, fit.centers[j], n);
    } else {
      value += c * entries.value(x, fit.centers[j]);
      deriv += c * entries.d_field(x, fit.centers[j], n);
    }
  }
  return {value, deriv};
}

}  // namespace rbf
