#include <doctest.h>

#include <cmath>

#include "rbf/geometry.hpp"

using namespace rbf;

namespace {
const double kPi = 3.14159265358979323846;
}

TEST_CASE("unit circle with L=4 places nodes at the axis points") {
  const Domain circle = Domain::circle({0, 0}, 1.0);
  BoundaryData data;
  const auto nodes = generate_boundary_nodes(circle, 4, 1.0, data);
  REQUIRE(nodes.size() == 4);
  const Point2 expected_pos[] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  for (int i = 0; i < 4; ++i) {
    CHECK(nodes[i].position.x == doctest::Approx(expected_pos[i].x).epsilon(1e-14).scale(1.0));
    CHECK(nodes[i].position.y == doctest::Approx(expected_pos[i].y).epsilon(1e-14).scale(1.0));
    CHECK(nodes[i].normal.x == doctest::Approx(expected_pos[i].x).epsilon(1e-14).scale(1.0));
    CHECK(nodes[i].normal.y == doctest::Approx(expected_pos[i].y).epsilon(1e-14).scale(1.0));
    CHECK(nodes[i].bc == BcKind::dirichlet);
  }
}

TEST_CASE("every generated normal is unit and outward") {
  BoundaryData data;
  const Domain shapes[] = {Domain::circle({0.5, -1.0}, 2.0),
                           Domain::rectangle({0, 0}, {1, 1}),
                           Domain::ellipse({0, 0}, 2.0, 1.0)};
  for (const auto& domain : shapes) {
    for (int L : {4, 7, 16, 33}) {
      const auto nodes = generate_boundary_nodes(domain, L, 0.5, data);
      REQUIRE(static_cast<int>(nodes.size()) == L);
      for (const auto& node : nodes) {
        CHECK(is_unit(node.normal));
        const Point2 outside = node.position + 1e-6 * node.normal;
        CHECK_FALSE(domain.contains(outside));
      }
    }
  }
}

TEST_CASE("ellipse normal at the semi-major vertex points along x") {
  const Domain ellipse = Domain::ellipse({0, 0}, 2.0, 1.0);
  BoundaryData data;
  // First node sits at parameter zero, which is (2, 0).
  const auto nodes = generate_boundary_nodes(ellipse, 8, 1.0, data);
  CHECK(nodes[0].position.x == doctest::Approx(2.0).epsilon(1e-9));
  CHECK(std::abs(nodes[0].position.y) < 1e-9);
  CHECK(nodes[0].normal.x == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(std::abs(nodes[0].normal.y) < 1e-9);
}

TEST_CASE("rectangle nodes avoid corners and split contiguously") {
  const Domain rect = Domain::rectangle({0, 0}, {1, 1});
  BoundaryData data;
  for (int L : {4, 6, 16, 21}) {
    const auto nodes = generate_boundary_nodes(rect, L, 0.5, data);
    for (const auto& node : nodes) {
      const bool at_corner =
          (node.position.x == 0.0 || node.position.x == 1.0) &&
          (node.position.y == 0.0 || node.position.y == 1.0);
      CHECK_FALSE(at_corner);
    }
    // Dirichlet block first.
    bool seen_neumann = false;
    int dirichlet = 0;
    for (const auto& node : nodes) {
      if (node.bc == BcKind::neumann)
        seen_neumann = true;
      else {
        CHECK_FALSE(seen_neumann);
        ++dirichlet;
      }
    }
    CHECK(dirichlet == (L + 1) / 2);
  }
}

TEST_CASE("contains is strict") {
  const Domain circle = Domain::circle({0, 0}, 1.0);
  CHECK(circle.contains({0, 0}));
  CHECK_FALSE(circle.contains({1, 0}));
  const Domain rect = Domain::rectangle({0, 0}, {1, 1});
  CHECK_FALSE(rect.contains({0.5, 1.5}));
  CHECK_FALSE(rect.contains({0.5, 1.0}));
  CHECK(rect.contains({0.5, 0.999}));
}

TEST_CASE("interior generation: empty, centered, exact count") {
  const Domain circle = Domain::circle({0, 0}, 1.0);
  CHECK(generate_interior_nodes(circle, 0, InteriorStrategy::halton).empty());

  const auto center = generate_interior_nodes(
      circle, 1, InteriorStrategy::uniform_grid_filtered);
  REQUIRE(center.size() == 1);
  CHECK(center[0].x == doctest::Approx(0.0).epsilon(1e-14).scale(1.0));
  CHECK(center[0].y == doctest::Approx(0.0).epsilon(1e-14).scale(1.0));

  for (int n : {5, 25, 81}) {
    for (auto strategy : {InteriorStrategy::uniform_grid_filtered,
                          InteriorStrategy::halton}) {
      const auto pts = generate_interior_nodes(circle, n, strategy);
      CHECK(static_cast<int>(pts.size()) == n);
      for (const auto& p : pts) CHECK(circle.contains(p));
    }
  }
}

TEST_CASE("halton prefix matches the hand-computed values") {
  // Base-2: 1/2, 1/4, 3/4, 1/8, 5/8; base-3: 1/3, 2/3, 1/9, 4/9, 7/9.
  const double base2[] = {0.5, 0.25, 0.75, 0.125, 0.625};
  const double base3[] = {1.0 / 3, 2.0 / 3, 1.0 / 9, 4.0 / 9, 7.0 / 9};
  for (int i = 0; i < 5; ++i) {
    CHECK(halton_value(i + 1, 2) == doctest::Approx(base2[i]).epsilon(1e-15));
    CHECK(halton_value(i + 1, 3) == doctest::Approx(base3[i]).epsilon(1e-15));
  }
  // Unit square: the first five Halton points are strictly interior, so the
  // generator returns exactly the scaled prefix.
  const Domain rect = Domain::rectangle({0, 0}, {1, 1});
  const auto pts = generate_interior_nodes(rect, 5, InteriorStrategy::halton);
  REQUIRE(pts.size() == 5);
  for (int i = 0; i < 5; ++i) {
    CHECK(pts[i].x == doctest::Approx(base2[i]).epsilon(1e-15));
    CHECK(pts[i].y == doctest::Approx(base3[i]).epsilon(1e-15));
  }
}

TEST_CASE("generation is deterministic") {
  const Domain ellipse = Domain::ellipse({0.25, 0.5}, 1.5, 0.75);
  BoundaryData data;
  data.dirichlet = [](Point2 p) { return p.x + p.y; };
  const auto a = generate_boundary_nodes(ellipse, 17, 0.7, data);
  const auto b = generate_boundary_nodes(ellipse, 17, 0.7, data);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].position.x == b[i].position.x);
    CHECK(a[i].position.y == b[i].position.y);
    CHECK(a[i].normal.x == b[i].normal.x);
    CHECK(a[i].bc_value == b[i].bc_value);
  }
  const auto p1 = generate_interior_nodes(ellipse, 40, InteriorStrategy::halton);
  const auto p2 = generate_interior_nodes(ellipse, 40, InteriorStrategy::halton);
  for (std::size_t i = 0; i < p1.size(); ++i) {
    CHECK(p1[i].x == p2[i].x);
    CHECK(p1[i].y == p2[i].y);
  }
}

TEST_CASE("node set validation") {
  const Domain circle = Domain::circle({0, 0}, 1.0);
  BoundaryData data;
  auto nodes = generate_boundary_nodes(circle, 8, 0.5, data);
  CHECK_NOTHROW(NodeSet::create(nodes, {{0.1, 0.2}}));

  // Neumann before Dirichlet violates the ordering invariant.
  auto bad = nodes;
  std::swap(bad.front(), bad.back());
  CHECK_THROWS_AS(NodeSet::create(bad, {}), ValidationError);

  // Coincident nodes are rejected.
  auto dup = nodes;
  dup.push_back(dup.back());
  CHECK_THROWS_AS(NodeSet::create(dup, {}), ValidationError);
}

TEST_CASE("degenerate domains are rejected") {
  CHECK_THROWS_WITH_AS(Domain::circle({0, 0}, 0.0), "degenerate domain",
                       ValidationError);
  CHECK_THROWS_WITH_AS(Domain::rectangle({1, 0}, {0, 1}), "degenerate domain",
                       ValidationError);
  CHECK_THROWS_WITH_AS(Domain::ellipse({0, 0}, 1.0, -2.0), "degenerate domain",
                       ValidationError);
}

TEST_CASE("boundary nodes sample the prescribed data") {
  const Domain circle = Domain::circle({0, 0}, 1.0);
  BoundaryData data;
  data.dirichlet = [](Point2 p) { return std::cos(2 * p.x); };
  data.neumann = [](Point2 p, Vec2 n) { return -2 * std::sin(2 * p.x) * n.x; };
  const auto nodes = generate_boundary_nodes(circle, 16, 0.5, data);
  for (const auto& node : nodes) {
    const double expected =
        node.bc == BcKind::dirichlet
            ? std::cos(2 * node.position.x)
            : -2 * std::sin(2 * node.position.x) * node.normal.x;
    CHECK(node.bc_value == expected);
  }
  (void)kPi;
}
