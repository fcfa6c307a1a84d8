#include <doctest.h>

#include <random>

#include "hardy/errors.hpp"
#include "hardy/functional.hpp"
#include "reference.hpp"

using namespace hardy;

namespace {

Domain unit_interval() { return Domain::interval(0, 1); }
Domain unit_square() { return Domain::polygon({{0, 0}, {1, 0}, {1, 1}, {0, 1}}); }

SpacePtr interval_space(int n) {
  return Space::interval(unit_interval(), build_interval_mesh({0, 1}, n, 1.0, {}));
}

SpacePtr square_space(double h) {
  const auto d = unit_square();
  return Space::triangles(d, build_polygon_mesh(*d.as<ConvexPolygon>(), h, {}, 0.0));
}

Field fill(const SpacePtr& s, const BoundaryPartition& part, const std::function<double(const Point&)>& f) {
  Field u = make_field(s, part);
  for (int i = 0; i < s->node_count(); ++i)
    if (!u.pinned[i]) u.values[i] = f(s->node_coordinates()[i]);
  return u;
}

std::vector<double> nodes_of(const SpacePtr& s) {
  std::vector<double> x;
  for (const auto& c : s->node_coordinates()) x.push_back(c[0]);
  return x;
}

}  // namespace

TEST_CASE("gradient energy") {
  const auto s = interval_space(10);
  const auto none = BoundaryPartition::uniform(unit_interval(), BoundaryCondition::robin(1.0));
  CHECK(dirichlet_energy_p(fill(s, none, [](const Point& x) { return x[0]; }), 2.0) ==
        doctest::Approx(1.0).epsilon(1e-14));
  CHECK(dirichlet_energy_p(fill(s, none, [](const Point&) { return 3.0; }), 2.0) == 0.0);

  const auto q = square_space(0.25);
  const auto rq = BoundaryPartition::uniform(unit_square(), BoundaryCondition::robin(1.0));
  CHECK(dirichlet_energy_p(fill(q, rq, [](const Point& x) { return x[0]; }), 3.0) ==
        doctest::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("boundary energy") {
  const auto q = square_space(0.25);
  for (double p : {1.5, 2.0, 4.0}) {
    const auto rq = BoundaryPartition::uniform(unit_square(), BoundaryCondition::robin(1.0));
    CHECK(boundary_energy(fill(q, rq, [](const Point&) { return 1.0; }), rq, p) ==
          doctest::Approx(4.0).epsilon(1e-13));
  }
  const auto zero = BoundaryPartition::uniform(unit_square(), BoundaryCondition::robin(0.0));
  CHECK(boundary_energy(fill(q, zero, [](const Point&) { return 1.0; }), zero, 2.0) == 0.0);

  const auto s = interval_space(8);
  const BoundaryPartition ends(unit_interval(), {BoundaryCondition::robin(3.0), BoundaryCondition::robin(5.0)});
  CHECK(boundary_energy(fill(s, ends, [](const Point& x) { return 2.0 * (1.0 - x[0]); }), ends, 2.0) ==
        doctest::Approx(12.0).epsilon(1e-14));
}

TEST_CASE("weighted norm against closed forms and quadrature") {
  const auto s = interval_space(200);
  const auto two = BoundaryPartition::uniform(unit_interval(), BoundaryCondition::robin(2.0));
  const auto w2 = build_weight(*s, two, 2.0);
  const auto one = fill(s, two, [](const Point&) { return 1.0; });
  CHECK(weighted_norm_pp(one, w2, 2.0) == doctest::Approx(16.0 / 3.0).epsilon(1e-12));
  ref::Interval1D oracle{0, 1, 2.0, 2.0, 2.0};
  CHECK(weighted_norm_pp(one, w2, 2.0) == doctest::Approx(oracle.norm(nodes_of(s), one.values)).epsilon(1e-12));

  const auto zero = fill(s, two, [](const Point&) { return 0.0; });
  CHECK(weighted_norm_pp(zero, w2, 2.0) == 0.0);

  const auto dir = BoundaryPartition::uniform(unit_interval(), BoundaryCondition::dirichlet());
  const auto wd = build_weight(*s, dir, 2.0);
  const auto tent = fill(s, dir, [](const Point& x) { return std::min(x[0], 1.0 - x[0]); });
  CHECK(weighted_norm_pp(tent, wd, 2.0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(rayleigh(tent, dir, wd, 2.0) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("quotient of the constant with sigma = 1") {
  const auto s = interval_space(100);
  const auto one = BoundaryPartition::uniform(unit_interval(), BoundaryCondition::robin(1.0));
  const auto w = build_weight(*s, one, 2.0);
  const auto u = fill(s, one, [](const Point&) { return 1.0; });
  CHECK(boundary_energy(u, one, 2.0) == doctest::Approx(2.0));
  CHECK(weighted_norm_pp(u, w, 2.0) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(rayleigh(u, one, w, 2.0) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("errors") {
  const auto s = interval_space(10);
  const auto t = interval_space(12);
  const auto one = BoundaryPartition::uniform(unit_interval(), BoundaryCondition::robin(1.0));
  const auto u = fill(s, one, [](const Point&) { return 1.0; });
  CHECK_THROWS_AS(weighted_norm_pp(u, build_weight(*t, one, 2.0), 2.0), ParameterError);
  CHECK_THROWS_AS(weighted_norm_pp(u, build_weight(*s, one, 3.0), 2.0), ParameterError);
  const auto z = fill(s, one, [](const Point&) { return 0.0; });
  CHECK_THROWS_AS(rayleigh(z, one, build_weight(*s, one, 2.0), 2.0), DegenerateFieldError);
}

TEST_CASE("property: p-homogeneity and scale invariance") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  const auto q = square_space(0.2);
  const BoundaryPartition mixed(unit_square(), {BoundaryCondition::dirichlet(), BoundaryCondition::robin(1.0),
                                                BoundaryCondition::robin(0.5), BoundaryCondition::robin(2.0)});
  for (double p : {1.5, 2.0, 3.0}) {
    const auto w = build_weight(*q, mixed, p);
    for (int k = 0; k < 10; ++k) {
      const auto u = fill(q, mixed, [&](const Point&) { return U(rng); });
      const double c = 7.0 * U(rng);
      Field cu = u;
      for (auto& v : cu.values) v *= c;
      const double cp = std::pow(std::abs(c), p);
      const double num = dirichlet_energy_p(u, p) + boundary_energy(u, mixed, p);
      CHECK(dirichlet_energy_p(cu, p) + boundary_energy(cu, mixed, p) == doctest::Approx(cp * num).epsilon(1e-12));
      CHECK(weighted_norm_pp(cu, w, p) == doctest::Approx(cp * weighted_norm_pp(u, w, p)).epsilon(1e-12));
      CHECK(rayleigh(cu, mixed, w, p) == doctest::Approx(rayleigh(u, mixed, w, p)).epsilon(1e-12));
    }
  }
}

TEST_CASE("property: second-order convergence for a smooth field") {
  // u = t^2 on [0, 1], Robin sigma = 1: energy 4/3, weighted norm by quadrature
  const auto one = BoundaryPartition::uniform(unit_interval(), BoundaryCondition::robin(1.0));
  ref::Interval1D oracle{0, 1, 1.0, 1.0, 2.0};
  const double norm_exact = ref::integrate([&](double t) { return t * t * t * t * oracle.weight(t); }, 0.0, 0.5) +
                            ref::integrate([&](double t) { return t * t * t * t * oracle.weight(t); }, 0.5, 1.0);
  double prev_e = 0.0, prev_n = 0.0;
  for (int n : {16, 32, 64, 128}) {
    const auto s = interval_space(n);
    const auto u = fill(s, one, [](const Point& x) { return x[0] * x[0]; });
    const double ee = std::abs(dirichlet_energy_p(u, 2.0) - 4.0 / 3.0);
    const double en = std::abs(weighted_norm_pp(u, build_weight(*s, one, 2.0), 2.0) - norm_exact);
    if (prev_e > 0.0) {
      CHECK(prev_e / ee == doctest::Approx(4.0).epsilon(0.05));
      CHECK(prev_n / en == doctest::Approx(4.0).epsilon(0.1));
    }
    prev_e = ee;
    prev_n = en;
  }
}

TEST_CASE("gradient: finite differences and Euler identity") {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  const auto q = square_space(0.25);
  const BoundaryPartition mixed(unit_square(), {BoundaryCondition::dirichlet(), BoundaryCondition::robin(1.0),
                                                BoundaryCondition::robin(0.5), BoundaryCondition::robin(2.0)});
  for (double p : {1.5, 2.0, 3.0}) {
    const auto w = build_weight(*q, mixed, p);
    const auto u = fill(q, mixed, [&](const Point&) { return 0.5 + U(rng); });
    const auto g = rayleigh_gradient(u, mixed, w, p);
    double scale = 0.0, dot = 0.0;
    for (std::size_t i = 0; i < u.values.size(); ++i) {
      scale = std::max(scale, std::abs(u.values[i]));
      dot += g.values[i] * u.values[i];
    }
    CHECK(std::abs(dot) < 1e-10 * std::max(1.0, scale));
    const double h = 1e-6 * scale;
    for (std::size_t i = 0; i < u.values.size(); ++i) {
      if (u.pinned[i]) {
        CHECK(g.values[i] == 0.0);
        continue;
      }
      Field a = u, b = u;
      a.values[i] += h;
      b.values[i] -= h;
      const double fd = (rayleigh(a, mixed, w, p) - rayleigh(b, mixed, w, p)) / (2 * h);
      CHECK(g.values[i] == doctest::Approx(fd).epsilon(1e-5).scale(1e-3));
    }
  }
}
