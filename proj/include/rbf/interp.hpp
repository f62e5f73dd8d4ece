#pragma once

#include <string>

#include "rbf/linalg.hpp"
#include "rbf/geometry.hpp"
#include "rbf/kernels.hpp"

namespace rbf {

/// Scattered-data interpolant with boundary normal-derivative constraints;
/// the interpolation matrix is symmetric for any node layout.
struct HermiteInterpolant {
  Kernel kernel = Kernel::tps(2);
  NodeSet nodes;
  Vector alpha;  // value-source coefficients, all L+N nodes
  Vector beta;   // normal-derivative-source coefficients, L boundary nodes
  double matrix_symmetry_defect = 0.0;
};

/// u holds samples at all L+N nodes (boundary block first); q holds du/dn at
/// the L boundary nodes.
HermiteInterpolant hermite_fit(const NodeSet& nodes, const Vector& u,
                               const Vector& q, const Kernel& kernel);
double hermite_evaluate(const HermiteInterpolant& interp, Point2 x);

/// Values-only RBF fit (the comparison baseline).
struct PlainInterpolant {
  Kernel kernel = Kernel::tps(2);
  std::vector<Point2> centers;
  Vector coefficients;
};

PlainInterpolant plain_fit(const std::vector<Point2>& centers, const Vector& u,
                           const Kernel& kernel);
double plain_evaluate(const PlainInterpolant& interp, Point2 x);

/// Smooth test function with an analytic gradient (for the boundary
/// normal-derivative data).
struct SmoothTestFunction {
  std::string name;
  std::function<double(Point2)> value;
  std::function<Vec2(Point2)> gradient;
};

/// The three fixed smooth test functions of the edge-effect comparison.
std::vector<SmoothTestFunction> edge_test_suite();

struct EdgeErrorReport {
  double hermite_band_error = 0.0;
  double plain_band_error = 0.0;
  double ratio = 1.0;
  int band_points = 0;
};

/// Max interpolation error of both fits over a fixed 200-point sample of the
/// boundary-adjacent band (distance below twice the mean node spacing).
EdgeErrorReport edge_error_report(const SmoothTestFunction& f,
                                  const Domain& domain, const NodeSet& nodes,
                                  const Kernel& kernel);

/// Mean nearest-neighbor distance over all nodes.
double mean_node_spacing(const NodeSet& nodes);

}  // namespace rbf
