#include <doctest.h>

#include <random>

#include "hardy/errors.hpp"
#include "hardy/geometry.hpp"

using namespace hardy;

namespace {
Domain unit_square() { return Domain::polygon({{0, 0}, {1, 0}, {1, 1}, {0, 1}}); }
Point pt(double x, double y) { return {x, y}; }
}  // namespace

TEST_CASE("distance to boundary closed forms") {
  const auto sq = unit_square();
  CHECK(distance_to_boundary(sq, pt(0.3, 0.4)) == doctest::Approx(0.3).epsilon(1e-15));
  CHECK(distance_to_boundary(Domain::interval(0, 1), Point{0.7}) == doctest::Approx(0.3).epsilon(1e-15));
  CHECK(distance_to_boundary(Domain::ball(2, 1.0), pt(0.5, 0.0)) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(distance_to_boundary(Domain::exterior_ball(3, 1.0, 10.0), Point{0.0, 2.0, 0.0}) ==
        doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("points outside the closure are rejected") {
  CHECK_THROWS_AS(distance_to_boundary(unit_square(), pt(1.5, 0.5)), DomainError);
  CHECK_THROWS_AS(distance_to_boundary(Domain::interval(0, 1), Point{-0.1}), DomainError);
  CHECK_THROWS_AS(distance_to_boundary(Domain::ball(2, 1.0), pt(2.0, 0.0)), DomainError);
  CHECK_THROWS_AS(distance_to_boundary(Domain::exterior_ball(2, 1.0, 10.0), pt(0.2, 0.0)), DomainError);
}

TEST_CASE("projection and tie-break") {
  const auto sq = unit_square();
  auto pr = boundary_projection(sq, pt(0.3, 0.4));
  CHECK(pr.point[0] == doctest::Approx(0.0));
  CHECK(pr.point[1] == doctest::Approx(0.4));
  CHECK(pr.piece_id == 3);  // left edge runs from (0,1) to (0,0)
  CHECK(pr.multiplicity == 1);

  auto centre = boundary_projection(sq, pt(0.5, 0.5));
  CHECK(centre.multiplicity == 4);
  CHECK(centre.piece_id == 0);
  CHECK(centre.point[1] == doctest::Approx(0.0));

  auto iv = boundary_projection(Domain::interval(0, 1), Point{0.2});
  CHECK(iv.point[0] == 0.0);
  CHECK(iv.piece_id == 0);
  CHECK(iv.multiplicity == 1);

  auto mid = boundary_projection(Domain::interval(0, 1), Point{0.5});
  CHECK(mid.piece_id == 0);
  CHECK(mid.multiplicity == 2);

  auto bc = boundary_projection(Domain::ball(2, 1.0), pt(0.0, 0.0));
  CHECK(bc.multiplicity == kContinuumMultiplicity);
}

TEST_CASE("inradius") {
  CHECK(inradius(unit_square()) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(inradius(Domain::interval(0, 1)) == 0.5);
  CHECK(inradius(Domain::ball(3, 2.0)) == 2.0);
  // right triangle with legs 3, 4: r = (3 + 4 - 5) / 2
  CHECK(inradius(Domain::polygon({{0, 0}, {4, 0}, {0, 3}})) == doctest::Approx(1.0).epsilon(1e-10));
  CHECK_THROWS_AS(inradius(Domain::exterior_ball(2, 1.0, 10.0)), UnsupportedVariantError);
}

TEST_CASE("nearest count") {
  const auto sq = unit_square();
  CHECK(nearest_count(sq, pt(0.25, 0.25), 1e-12) == 2);
  CHECK(nearest_count(sq, pt(0.3, 0.4), 1e-12) == 1);
  CHECK(nearest_count(sq, pt(0.5, 0.5), 1e-12) == 4);
}

TEST_CASE("invalid domains") {
  CHECK_THROWS(Domain::interval(1, 0));
  CHECK_THROWS(Domain::polygon({{0, 0}, {1, 0}}));
  CHECK_THROWS(Domain::polygon({{0, 0}, {0, 1}, {1, 1}, {1, 0}}));  // clockwise
  CHECK_THROWS(Domain::ball(2, -1.0));
  CHECK_THROWS(Domain::exterior_ball(2, 1.0, 0.5));
}

TEST_CASE("property: distance is 1-Lipschitz and matches the projection") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  const auto poly = Domain::polygon({{0, 0}, {2, 0}, {2.5, 1}, {1, 2}, {-0.5, 1}});
  const auto* cp = poly.as<ConvexPolygon>();
  auto inside = [&] {
    for (;;) {
      Vec2 v{-0.5 + 3.0 * U(rng), 2.0 * U(rng)};
      bool ok = true;
      for (int e = 0; e < 5; ++e) ok = ok && edge_line_distance(*cp, e, v) >= 0.0;
      if (ok) return v;
    }
  };
  for (int k = 0; k < 2000; ++k) {
    const Vec2 a = inside(), b = inside();
    const double da = distance_to_boundary(poly, pt(a.x, a.y));
    const double db = distance_to_boundary(poly, pt(b.x, b.y));
    CHECK(std::abs(da - db) <= norm(a - b) + 1e-14);

    const auto pr = boundary_projection(poly, pt(a.x, a.y));
    CHECK(std::hypot(a.x - pr.point[0], a.y - pr.point[1]) == doctest::Approx(da).epsilon(1e-12));

    double brute = INFINITY;
    for (int e = 0; e < 5; ++e) brute = std::min(brute, edge_line_distance(*cp, e, a));
    CHECK(da == doctest::Approx(brute).epsilon(1e-13));
  }
}

TEST_CASE("property: singular set has measure zero in samples") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  const auto sq = unit_square();
  int multi = 0;
  for (int k = 0; k < 100000; ++k) multi += nearest_count(sq, pt(U(rng), U(rng)), 1e-9) > 1;
  CHECK(multi == 0);
}

TEST_CASE("boundary measure and sphere area") {
  CHECK(boundary_measure(unit_square()) == doctest::Approx(4.0));
  CHECK(boundary_measure(Domain::interval(0, 3)) == 2.0);
  CHECK(unit_sphere_area(1) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(unit_sphere_area(2) == doctest::Approx(2 * M_PI));
  CHECK(unit_sphere_area(3) == doctest::Approx(4 * M_PI));
}
