#include "rbf/geometry.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

namespace rbf {

namespace {

constexpr double kPi = 3.14159265358979323846;

void require_finite(Point2 p) {
  if (!std::isfinite(p.x) || !std::isfinite(p.y))
    throw ValidationError("degenerate domain");
}

}  // namespace

Domain Domain::circle(Point2 center, double radius) {
  require_finite(center);
  if (!(radius > 0.0) || !std::isfinite(radius))
    throw ValidationError("degenerate domain");
  Domain d;
  d.kind_ = DomainKind::circle;
  d.center_ = center;
  d.a_ = d.b_ = radius;
  return d;
}

Domain Domain::rectangle(Point2 lo, Point2 hi) {
  require_finite(lo);
  require_finite(hi);
  if (!(lo.x < hi.x) || !(lo.y < hi.y))
    throw ValidationError("degenerate domain");
  Domain d;
  d.kind_ = DomainKind::rectangle;
  d.lo_ = lo;
  d.hi_ = hi;
  d.center_ = {(lo.x + hi.x) / 2, (lo.y + hi.y) / 2};
  return d;
}

Domain Domain::ellipse(Point2 center, double a, double b) {
  require_finite(center);
  if (!(a > 0.0) || !(b > 0.0) || !std::isfinite(a) || !std::isfinite(b))
    throw ValidationError("degenerate domain");
  Domain d;
  d.kind_ = DomainKind::ellipse;
  d.center_ = center;
  d.a_ = a;
  d.b_ = b;
  return d;
}

double Domain::diameter() const {
  switch (kind_) {
    case DomainKind::circle:
      return 2 * a_;
    case DomainKind::ellipse:
      return 2 * std::max(a_, b_);
    case DomainKind::rectangle:
      return (hi_ - lo_).norm();
  }
  return 0;
}

bool Domain::contains(Point2 p) const {
  switch (kind_) {
    case DomainKind::circle:
      return (p - center_).norm() < a_;
    case DomainKind::ellipse: {
      const double u = (p.x - center_.x) / a_;
      const double v = (p.y - center_.y) / b_;
      return u * u + v * v < 1.0;
    }
    case DomainKind::rectangle:
      return p.x > lo_.x && p.x < hi_.x && p.y > lo_.y && p.y < hi_.y;
  }
  return false;
}

double Domain::boundary_distance_lb(Point2 p) const {
  switch (kind_) {
    case DomainKind::circle:
      return a_ - (p - center_).norm();
    case DomainKind::rectangle:
      return std::min(std::min(p.x - lo_.x, hi_.x - p.x),
                      std::min(p.y - lo_.y, hi_.y - p.y));
    case DomainKind::ellipse: {
      const double u = (p.x - center_.x) / a_;
      const double v = (p.y - center_.y) / b_;
      const double rho = std::sqrt(u * u + v * v);
      return (1.0 - rho) * std::min(a_, b_);
    }
  }
  return 0;
}

namespace {

struct BoundaryPoint {
  Point2 position;
  Vec2 normal;
};

// Circle: arc-length-uniform is uniform in angle.
std::vector<BoundaryPoint> circle_points(const Domain& d, int L) {
  std::vector<BoundaryPoint> out;
  out.reserve(L);
  for (int i = 0; i < L; ++i) {
    const double t = 2 * kPi * i / L;
    const Vec2 n{std::cos(t), std::sin(t)};
    out.push_back({d.centroid() + d.radius() * n, n});
  }
  return out;
}

// Ellipse: arc-length-uniform via a 2048-segment chord-length table with
// linear interpolation in the angle parameter.
std::vector<BoundaryPoint> ellipse_points(const Domain& d, int L) {
  constexpr int kSegments = 2048;
  const double a = d.semi_axis_a(), b = d.semi_axis_b();
  auto at = [&](double t) -> Point2 {
    return {d.centroid().x + a * std::cos(t), d.centroid().y + b * std::sin(t)};
  };
  std::array<double, kSegments + 1> cum{};
  Point2 prev = at(0.0);
  for (int i = 1; i <= kSegments; ++i) {
    const Point2 cur = at(2 * kPi * i / kSegments);
    cum[i] = cum[i - 1] + (cur - prev).norm();
    prev = cur;
  }
  const double total = cum[kSegments];
  std::vector<BoundaryPoint> out;
  out.reserve(L);
  int seg = 0;
  for (int i = 0; i < L; ++i) {
    const double s = total * i / L;
    while (seg + 1 < kSegments && cum[seg + 1] < s) ++seg;
    const double span = cum[seg + 1] - cum[seg];
    const double frac = span > 0 ? (s - cum[seg]) / span : 0.0;
    const double t = 2 * kPi * (seg + frac) / kSegments;
    const Point2 p = at(t);
    // Outward normal from the gradient of the implicit equation.
    Vec2 n{(p.x - d.centroid().x) / (a * a), (p.y - d.centroid().y) / (b * b)};
    const double len = n.norm();
    out.push_back({p, {n.x / len, n.y / len}});
  }
  return out;
}

// Rectangle: nodes distributed per edge (largest-remainder allocation of the
// perimeter-uniform quota), placed with half-spacing offsets inside each
// edge so corners never carry a node.
std::vector<BoundaryPoint> rectangle_points(const Domain& d, int L) {
  const Point2 lo = d.lo(), hi = d.hi();
  const double w = hi.x - lo.x, h = hi.y - lo.y;
  const double per = 2 * (w + h);
  const std::array<double, 4> len{w, h, w, h};
  std::array<int, 4> count{};
  std::array<double, 4> frac{};
  int assigned = 0;
  for (int e = 0; e < 4; ++e) {
    const double quota = len[e] * L / per;
    count[e] = static_cast<int>(std::floor(quota));
    frac[e] = quota - count[e];
    assigned += count[e];
  }
  while (assigned < L) {
    int best = 0;
    for (int e = 1; e < 4; ++e)
      if (frac[e] > frac[best]) best = e;
    ++count[best];
    frac[best] = -1;
    ++assigned;
  }

  std::vector<BoundaryPoint> out;
  out.reserve(L);
  auto emit_edge = [&](int e) {
    const int m = count[e];
    for (int i = 0; i < m; ++i) {
      const double s = (i + 0.5) * len[e] / m;
      switch (e) {
        case 0:  // bottom, left -> right
          out.push_back({{lo.x + s, lo.y}, {0, -1}});
          break;
        case 1:  // right, bottom -> top
          out.push_back({{hi.x, lo.y + s}, {1, 0}});
          break;
        case 2:  // top, right -> left
          out.push_back({{hi.x - s, hi.y}, {0, 1}});
          break;
        case 3:  // left, top -> bottom
          out.push_back({{lo.x, hi.y - s}, {-1, 0}});
          break;
      }
    }
  };
  for (int e = 0; e < 4; ++e) emit_edge(e);
  return out;
}

}  // namespace

std::vector<BoundaryNode> generate_boundary_nodes(const Domain& domain, int L,
                                                  double bc_split,
                                                  const BoundaryData& data) {
  if (L < 4) throw ValidationError("boundary node count must be at least 4");
  if (!(bc_split >= 0.0 && bc_split <= 1.0))
    throw ValidationError("bc_split must lie in [0,1]");

  std::vector<BoundaryPoint> pts;
  switch (domain.kind()) {
    case DomainKind::circle:
      pts = circle_points(domain, L);
      break;
    case DomainKind::ellipse:
      pts = ellipse_points(domain, L);
      break;
    case DomainKind::rectangle:
      pts = rectangle_points(domain, L);
      break;
  }

  const int n_dirichlet = static_cast<int>(std::ceil(bc_split * L));
  std::vector<BoundaryNode> nodes;
  nodes.reserve(L);
  for (int i = 0; i < L; ++i) {
    BoundaryNode node;
    node.position = pts[i].position;
    node.normal = pts[i].normal;
    node.bc = i < n_dirichlet ? BcKind::dirichlet : BcKind::neumann;
    node.bc_value = node.bc == BcKind::dirichlet
                        ? data.dirichlet(node.position)
                        : data.neumann(node.position, node.normal);
    nodes.push_back(node);
  }
  return nodes;
}

double halton_value(int index, int base) {
  double f = 1.0, r = 0.0;
  int i = index;
  while (i > 0) {
    f /= base;
    r += f * (i % base);
    i /= base;
  }
  return r;
}

namespace {

std::vector<Point2> interior_grid(const Domain& domain, int N) {
  const Point2 c = domain.centroid();
  const double diam = domain.diameter();
  const double margin = 1e-6 * diam;
  // Odd grid sizes keep the centroid itself on the grid.
  for (int k = 2 * static_cast<int>(std::ceil(std::sqrt(double(N)))) + 1;
       k <= 4097; k += 2) {
    const double spacing = diam / (k - 1);
    std::vector<Point2> candidates;
    for (int iy = 0; iy < k; ++iy) {
      for (int ix = 0; ix < k; ++ix) {
        Point2 p{c.x + (ix - (k - 1) / 2) * spacing,
                 c.y + (iy - (k - 1) / 2) * spacing};
        if (domain.contains(p) && domain.boundary_distance_lb(p) > margin)
          candidates.push_back(p);
      }
    }
    if (static_cast<int>(candidates.size()) < N) continue;
    std::stable_sort(candidates.begin(), candidates.end(),
                     [&](const Point2& a, const Point2& b) {
                       const double da = (a - c).norm(), db = (b - c).norm();
                       if (da != db) return da < db;
                       if (a.y != b.y) return a.y < b.y;
                       return a.x < b.x;
                     });
    candidates.resize(N);
    return candidates;
  }
  throw NumericalError("interior placement failed");
}

std::vector<Point2> interior_halton(const Domain& domain, int N) {
  // Halton points in the bounding box, rejected when too close to the
  // boundary or outside.
  Point2 lo, hi;
  switch (domain.kind()) {
    case DomainKind::rectangle:
      lo = domain.lo();
      hi = domain.hi();
      break;
    case DomainKind::circle:
    case DomainKind::ellipse:
      lo = {domain.centroid().x - domain.semi_axis_a(),
            domain.centroid().y - domain.semi_axis_b()};
      hi = {domain.centroid().x + domain.semi_axis_a(),
            domain.centroid().y + domain.semi_axis_b()};
      break;
  }
  const double margin = 1e-6 * domain.diameter();
  std::vector<Point2> out;
  out.reserve(N);
  for (int idx = 1; static_cast<int>(out.size()) < N; ++idx) {
    if (idx > 1000 * (N + 16)) throw NumericalError("interior placement failed");
    Point2 p{lo.x + (hi.x - lo.x) * halton_value(idx, 2),
             lo.y + (hi.y - lo.y) * halton_value(idx, 3)};
    if (domain.contains(p) && domain.boundary_distance_lb(p) > margin)
      out.push_back(p);
  }
  return out;
}

}  // namespace

std::vector<Point2> generate_interior_nodes(const Domain& domain, int N,
                                            InteriorStrategy strategy) {
  if (N < 0) throw ValidationError("interior node count must be nonnegative");
  if (N == 0) return {};
  return strategy == InteriorStrategy::uniform_grid_filtered
             ? interior_grid(domain, N)
             : interior_halton(domain, N);
}

int NodeSet::dirichlet_count() const {
  int n = 0;
  for (const auto& b : boundary)
    if (b.bc == BcKind::dirichlet) ++n;
  return n;
}

int NodeSet::neumann_count() const { return boundary_count() - dirichlet_count(); }

std::vector<Point2> NodeSet::all_positions() const {
  std::vector<Point2> out;
  out.reserve(boundary.size() + interior.size());
  for (const auto& b : boundary) out.push_back(b.position);
  for (const auto& p : interior) out.push_back(p);
  return out;
}

NodeSet NodeSet::create(std::vector<BoundaryNode> boundary,
                        std::vector<Point2> interior) {
  if (boundary.empty()) throw ValidationError("node set needs boundary nodes");
  bool seen_neumann = false;
  for (const auto& b : boundary) {
    if (b.bc == BcKind::neumann)
      seen_neumann = true;
    else if (seen_neumann)
      throw ValidationError("boundary nodes must list Dirichlet block first");
    if (!is_unit(b.normal))
      throw ValidationError("boundary normal is not unit length");
  }
  NodeSet ns{std::move(boundary), std::move(interior)};
  const auto pts = ns.all_positions();
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j)
      if ((pts[i] - pts[j]).norm() == 0.0)
        throw ValidationError("node set contains coincident nodes");
  return ns;
}

}  // namespace rbf
