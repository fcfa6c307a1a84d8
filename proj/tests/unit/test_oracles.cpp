#include <doctest.h>

#include <random>

#include "hardy/errors.hpp"
#include "hardy/functional.hpp"
#include "hardy/oracles.hpp"
#include "reference.hpp"

using namespace hardy;

namespace {

Domain unit_interval() { return Domain::interval(0, 1); }
Domain unit_square() { return Domain::polygon({{0, 0}, {1, 0}, {1, 1}, {0, 1}}); }

/// Both sides of the 1D inequality by Boost quadrature.
Sides lemma_reference(const Profile1D& pr, double sigma, double p) {
  const double a = ref::alpha(p, sigma), b = pr.length(), c = ref::cp(p);
  double grad = 0.0, w = 0.0, plain = 0.0;
  for (std::size_t i = 0; i + 1 < pr.breakpoints.size(); ++i) {
    const double x0 = pr.breakpoints[i], x1 = pr.breakpoints[i + 1];
    const double u0 = pr.values[i], u1 = pr.values[i + 1];
    grad += std::pow(std::abs((u1 - u0) / (x1 - x0)), p) * (x1 - x0);
    auto u = [&](double t) { return std::abs(u0 + (u1 - u0) * (t - x0) / (x1 - x0)); };
    w += ref::integrate([&](double t) { return std::pow(u(t) / (t + a), p); }, x0, x1);
    plain += ref::integrate([&](double t) { return std::pow(u(t), p); }, x0, x1);
  }
  Sides s;
  s.lhs = grad + (std::isinf(sigma) ? 0.0 : sigma * std::pow(std::abs(pr.values[0]), p));
  s.rhs = c * w + (p - 1) * c * std::pow(b + a, -p) * plain;
  return s;
}

SpacePtr interval_space(std::vector<double> nodes) { return Space::interval(unit_interval(), Mesh1D{std::move(nodes)}); }

}  // namespace

TEST_CASE("lemma sides: closed-form pairs") {
  const auto one = lemma1_sides({{0, 1}, {1, 1}}, 1.0, 2.0);
  CHECK(one.lhs == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(std::abs(one.rhs - 4.0 / 9.0) < 1e-10);
  const auto lin = lemma1_sides({{0, 1}, {0, 1}}, kInfinity, 2.0);
  CHECK(std::abs(lin.lhs - 1.0) < 1e-10);
  CHECK(std::abs(lin.rhs - 1.0 / 3.0) < 1e-10);
  const auto zero = lemma1_sides({{0, 0.5, 1}, {0, 0, 0}}, 3.0, 1.5);
  CHECK(zero.lhs == 0.0);
  CHECK(zero.rhs == 0.0);
  CHECK_THROWS_AS(lemma1_sides({{0, 1}, {1, 0}}, kInfinity, 2.0), DomainError);
  CHECK_THROWS_AS(lemma1_sides({{0.1, 1}, {1, 0}}, 1.0, 2.0), ParameterError);
}

TEST_CASE("lemma sides agree with independent quadrature") {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  for (int k = 0; k < 40; ++k) {
    const double p = std::array<double, 3>{1.5, 2.0, 3.0}[k % 3];
    Profile1D pr;
    const int m = 2 + static_cast<int>(U(rng) * 10);
    double t = 0.0;
    for (int i = 0; i < m; ++i) {
      pr.breakpoints.push_back(t);
      pr.values.push_back(2 * U(rng) - 1);
      t += 0.05 + U(rng);
    }
    const double sigma = k % 4 == 0 ? kInfinity : 10 * U(rng);
    if (std::isinf(sigma)) pr.values[0] = 0.0;
    const auto s = lemma1_sides(pr, sigma, p);
    const auto r = lemma_reference(pr, sigma, p);
    CHECK(s.lhs == doctest::Approx(r.lhs).epsilon(1e-12));
    CHECK(s.rhs == doctest::Approx(r.rhs).epsilon(1e-10));
  }
}

TEST_CASE("property: lemma fuzz") {
  std::mt19937_64 rng(1234);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  int cases = 0;
  for (int k = 0; k < 200; ++k) {
    Profile1D pr;
    const int m = 2 + static_cast<int>(U(rng) * 19);
    double t = 0.0;
    for (int i = 0; i < m; ++i) {
      pr.breakpoints.push_back(t);
      pr.values.push_back(2 * U(rng) - 1);
      t += 0.05 + U(rng);
    }
    const bool dir = U(rng) < 0.125;
    const double sigma = dir ? kInfinity : 10 * U(rng);
    if (dir) pr.values[0] = 0.0;
    for (double p : {1.5, 2.0, 3.0}) {
      const auto s = lemma1_sides(pr, sigma, p);
      CHECK(s.lhs >= s.rhs - 1e-9 * std::max(1.0, s.lhs));
      ++cases;
    }
  }
  CHECK(cases == 600);
}

TEST_CASE("Robin lower bound") {
  CHECK(std::abs(theorem2_bound(2, 0.5, 1) - 0.3125) < 1e-12);
  CHECK(std::abs(theorem2_bound(2, 1, 1) - 0.25 * 10.0 / 9.0) < 1e-12);
  CHECK(theorem2_bound(2, 0.5, kInfinity) == 0.25);
  CHECK(theorem2_bound(2, 0.5, 1e12) == doctest::Approx(0.25).epsilon(1e-10));
  for (double p : {1.2, 2.0, 3.5})
    for (double s : {1e-3, 0.1, 1.0, 10.0, 1e3}) {
      CHECK(theorem2_bound(p, 0.7, s) >= cp_constant(p));
      // the correction underflows relative to C_p for large sigma and small p
      if (s <= 10.0) CHECK(theorem2_bound(p, 0.7, s) > cp_constant(p));
    }
  CHECK_THROWS_AS(theorem2_bound(2, 0.0, 1.0), ParameterError);
  CHECK_THROWS_AS(theorem2_bound(2, 1.0, 0.0), ParameterError);
}

TEST_CASE("improved Hardy right-hand side") {
  const auto dir = BoundaryPartition::uniform(unit_interval(), BoundaryCondition::dirichlet());
  auto s = Space::interval(unit_interval(), build_interval_mesh({0, 1}, 100, 1.0, {}));
  Field tent = make_field(s, dir);
  for (int i = 0; i < s->node_count(); ++i) tent.values[i] = std::min(s->node_radius(i), 1 - s->node_radius(i));
  const auto w = build_weight(*s, dir, 2.0);
  CHECK(std::abs(hardy_rhs_full(tent, w, 2.0, 0.5) - 1.0 / 3.0) < 1e-8);
  CHECK(std::abs(dirichlet_energy_p(tent, 2.0) - 1.0) < 1e-8);

  Field zero = make_field(s, dir);
  CHECK(hardy_rhs_full(zero, w, 2.0, 0.5) == 0.0);

  const auto none = BoundaryPartition::uniform(unit_interval(), BoundaryCondition::robin(0.0));
  Field ones = make_field(s, none);
  for (auto& v : ones.values) v = 1.0;
  CHECK(hardy_rhs_full(ones, build_weight(*s, none, 2.0), 2.0, 0.5) == 0.0);
}

TEST_CASE("property: improved Hardy inequality on random square fields") {
  const auto d = unit_square();
  const auto space = Space::triangles(d, build_polygon_mesh(*d.as<ConvexPolygon>(), 0.125, {}, 0.0));
  const std::vector<BoundaryPartition> classes{
      BoundaryPartition::uniform(d, BoundaryCondition::dirichlet()),
      BoundaryPartition::uniform(d, BoundaryCondition::robin(1.0)),
      BoundaryPartition(d, {BoundaryCondition::dirichlet(), BoundaryCondition::robin(1.0),
                            BoundaryCondition::robin(2.0), BoundaryCondition::dirichlet()})};
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  for (const auto& part : classes)
    for (double p : {1.5, 2.0, 3.0}) {
      const auto w = build_weight(*space, part, p);
      for (int k = 0; k < 100; ++k) {
        Field f = make_field(space, part);
        for (int i = 0; i < space->node_count(); ++i)
          if (!f.pinned[i]) f.values[i] = U(rng);
        const double q = dirichlet_energy_p(f, p) + boundary_energy(f, part, p);
        CHECK(q >= hardy_rhs_full(f, w, p, 0.5) - 1e-6 * std::max(1.0, q));
      }
    }
}

TEST_CASE("concentrating family: nodal values") {
  const auto dir = BoundaryPartition::uniform(unit_interval(), BoundaryCondition::dirichlet());
  std::vector<double> nodes;
  for (int i = 0; i <= 40; ++i) nodes.push_back(i / 40.0);
  nodes[2] = 0.05;
  const auto s = interval_space(nodes);
  const auto f = u_eps_field(s, dir, {0.0}, 0.25, 0.1, 2.0);
  CHECK(f.values[2] == doctest::Approx(std::pow(0.05, 0.6)).epsilon(1e-14));
  for (int i = 0; i < s->node_count(); ++i)
    if (std::min(nodes[i], 1 - nodes[i]) >= 0.2) CHECK(f.values[i] == 0.0);

  const BoundaryPartition mixed(unit_interval(), {BoundaryCondition::dirichlet(), BoundaryCondition::robin(1.0)});
  CHECK_THROWS_AS(u_eps_field(s, mixed, {1.0}, 0.25, 0.1, 2.0), DomainError);
  CHECK_THROWS_AS(u_eps_field(s, dir, {0.3}, 0.25, 0.1, 2.0), DomainError);
  CHECK_THROWS_AS(u_eps_field(s, dir, {0.0}, 0.25, 0.3, 2.0), ParameterError);
}

TEST_CASE("concentrating family: quotients against independent quadrature") {
  const auto d = unit_interval();
  const auto dir = BoundaryPartition::uniform(d, BoundaryCondition::dirichlet());
  MeshParams mp;
  mp.n = 2000;
  const auto s = default_space(d, dir, 2.0, mp);
  const auto w = build_weight(*s, dir, 2.0);
  std::vector<double> x;
  for (const auto& c : s->node_coordinates()) x.push_back(c[0]);
  ref::Interval1D oracle{0, 1, INFINITY, INFINITY, 2.0};
  double prev = INFINITY, prev_cont = INFINITY;
  for (double eps : {0.1, 0.01, 0.001}) {
    const auto f = u_eps_field(s, dir, {0.0}, 0.25, eps, 2.0);
    const double q = rayleigh(f, dir, w, 2.0);
    CHECK(q == doctest::Approx(oracle.quotient(x, f.values)).epsilon(1e-8));
    CHECK(q > 0.25);
    CHECK(q < prev);
    prev = q;
    const double cont = ref::u_eps_continuum(eps, 2.0);
    CHECK(cont < prev_cont);
    prev_cont = cont;
  }
  CHECK(prev_cont - 0.25 <= 0.03);
}

TEST_CASE("ball upper bound") {
  const double b = ball_upper_bound(2, 2, 1, 1);
  CHECK(std::abs(ref::ball_integral(2, 1.0, 0.5) - 0.64792) < 1e-5);
  CHECK(std::abs(b - (0.25 + 0.5 / (-1 + 1.5 * std::log(3.0)))) < 1e-10);
  CHECK(std::abs(b - 1.0217) < 1e-3);
  for (int n : {1, 2, 3})
    for (double p : {1.5, 2.0, 3.0}) CHECK(ball_upper_bound(n, p, 0.7, 2.0) == doctest::Approx(ref::ball_bound(n, p, 0.7, 2.0)).epsilon(1e-9));
  double prev = INFINITY;
  for (double R : {1.0, 1e2, 1e4, 1e6}) {
    const double corr = ball_upper_bound(2, 2, 1, R) - 0.25;
    CHECK(corr > 0.0);
    CHECK(corr < prev);
    prev = corr;
  }
  CHECK_THROWS_AS(ball_upper_bound(2, 2, 0.0, 1), ParameterError);
}

TEST_CASE("radial quotient of the ball test profile stays below the bound") {
  const auto d = Domain::ball(2, 1.0);
  const auto part = BoundaryPartition::uniform(d, BoundaryCondition::robin(1.0));
  const auto s = Space::ball_radial(d, build_radial_mesh(*d.as<Ball>(), 4000));
  Field f = make_field(s, part);
  for (int i = 0; i < s->node_count(); ++i) f.values[i] = std::sqrt(1.5 - s->node_radius(i));
  const double q = rayleigh(f, part, build_weight(*s, part, 2.0), 2.0);
  CHECK(q <= ball_upper_bound(2, 2, 1, 1) + 1e-3);
  CHECK(q >= theorem2_bound(2, 1.0, 1.0));
}

TEST_CASE("sigma probe") {
  MeshParams mp;
  mp.n = 200;
  const auto probe = sigma_limit_probe(unit_interval(), 2.0, {10.0, 0.1, 1.0}, mp, SolverConfig{});
  REQUIRE(probe.rows.size() == 3);
  CHECK(probe.rows[0].sigma == 0.1);
  CHECK(probe.rows[2].sigma == 10.0);
  for (const auto& r : probe.rows) CHECK(r.lambda >= r.theorem2 - 1e-6);
  CHECK(probe.strictly_decreasing);
  CHECK_THROWS_AS(sigma_limit_probe(unit_interval(), 2.0, {}, mp, SolverConfig{}), ParameterError);
}

TEST_CASE("certificates") {
  const auto d = unit_interval();
  auto c = analytic_certificates(d, BoundaryPartition::uniform(d, BoundaryCondition::dirichlet()), 2.0);
  CHECK(*c.lower == 0.25);
  CHECK(*c.upper == 0.25);
  c = analytic_certificates(d, BoundaryPartition::uniform(d, BoundaryCondition::robin(1.0)), 2.0);
  CHECK(*c.lower == doctest::Approx(0.3125));
  CHECK_FALSE(c.upper.has_value());
  const auto ball = Domain::ball(2, 1.0);
  c = analytic_certificates(ball, BoundaryPartition::uniform(ball, BoundaryCondition::robin(1.0)), 2.0);
  CHECK(*c.upper == doctest::Approx(ball_upper_bound(2, 2, 1, 1)));
  const auto sq = unit_square();
  c = analytic_certificates(sq, BoundaryPartition::uniform(sq, BoundaryCondition::dirichlet()), 2.0);
  CHECK_FALSE(c.notes.empty());
  const auto ext = Domain::exterior_ball(2, 1.0, 1e3);
  c = analytic_certificates(ext, BoundaryPartition::uniform(ext, BoundaryCondition::robin(1.0)), 3.0);
  CHECK(*c.lower == doctest::Approx(1.0 / 27.0).epsilon(1e-15));
  c = analytic_certificates(ext, BoundaryPartition::uniform(ext, BoundaryCondition::robin(1.0)), 2.0);
  CHECK_FALSE(c.lower.has_value());
}
