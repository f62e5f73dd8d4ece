#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <vector>

#include "rbf/errors.hpp"

namespace rbf {

struct Point2 {
  double x = 0.0;
  double y = 0.0;

  Point2 operator+(const Point2& o) const { return {x + o.x, y + o.y}; }
  Point2 operator-(const Point2& o) const { return {x - o.x, y - o.y}; }
  Point2 operator*(double s) const { return {x * s, y * s}; }
  Point2 operator-() const { return {-x, -y}; }
  double dot(const Point2& o) const { return x * o.x + y * o.y; }
  double norm() const { return std::hypot(x, y); }
};

inline Point2 operator*(double s, const Point2& p) { return p * s; }

/// Direction vectors and outward normals share the point type.
using Vec2 = Point2;

inline bool is_unit(const Vec2& v, double tol = 1e-12) {
  return std::abs(v.x * v.x + v.y * v.y - 1.0) <= tol;
}

enum class BcKind { dirichlet, neumann };

enum class DomainKind { circle, rectangle, ellipse };

/// 2D test geometry: circle, axis-aligned rectangle, or axis-aligned ellipse.
class Domain {
 public:
  static Domain circle(Point2 center, double radius);
  static Domain rectangle(Point2 lo, Point2 hi);
  static Domain ellipse(Point2 center, double a, double b);

  DomainKind kind() const { return kind_; }
  Point2 centroid() const { return center_; }
  double radius() const { return a_; }
  double semi_axis_a() const { return a_; }
  double semi_axis_b() const { return b_; }
  Point2 lo() const { return lo_; }
  Point2 hi() const { return hi_; }
  double diameter() const;

  /// Strict interior membership (boundary points are outside).
  bool contains(Point2 p) const;

  /// Lower bound on the distance from an interior point to the boundary.
  /// Exact for circle and rectangle, conservative for ellipse.
  double boundary_distance_lb(Point2 p) const;

 private:
  Domain() = default;
  DomainKind kind_ = DomainKind::circle;
  Point2 center_;       // circle/ellipse
  double a_ = 0, b_ = 0;  // radius or semi-axes
  Point2 lo_, hi_;      // rectangle
};

struct BoundaryNode {
  Point2 position;
  Vec2 normal;  // unit outward
  BcKind bc = BcKind::dirichlet;
  double bc_value = 0.0;
};

/// Prescribed boundary value functions: D on the Dirichlet arc, N on the
/// Neumann arc (N receives the outward normal at the sample point).
struct BoundaryData {
  std::function<double(Point2)> dirichlet = [](Point2) { return 0.0; };
  std::function<double(Point2, Vec2)> neumann = [](Point2, Vec2) { return 0.0; };
};

/// Node layout for one problem instance. Boundary nodes keep the Dirichlet
/// block first, then the Neumann block; construction validates the ordering
/// and that all nodes are pairwise distinct.
struct NodeSet {
  std::vector<BoundaryNode> boundary;
  std::vector<Point2> interior;

  int dirichlet_count() const;
  int neumann_count() const;
  int boundary_count() const { return static_cast<int>(boundary.size()); }
  int interior_count() const { return static_cast<int>(interior.size()); }

  /// All node positions, boundary block first (index order used by the
  /// domain-type schemes).
  std::vector<Point2> all_positions() const;

  static NodeSet create(std::vector<BoundaryNode> boundary,
                        std::vector<Point2> interior);
};

/// Places L boundary nodes equally spaced in boundary parameter with
/// analytic outward normals. The first ceil(bc_split*L) nodes are Dirichlet;
/// bc_value is sampled from `data`. Rectangle nodes avoid the corners.
std::vector<BoundaryNode> generate_boundary_nodes(const Domain& domain, int L,
                                                  double bc_split,
                                                  const BoundaryData& data);

enum class InteriorStrategy { uniform_grid_filtered, halton };

/// Deterministically places exactly N strictly interior points.
std::vector<Point2> generate_interior_nodes(const Domain& domain, int N,
                                            InteriorStrategy strategy);

/// Standard Halton radical-inverse value, index starts at 1.
double halton_value(int index, int base);

}  // namespace rbf
