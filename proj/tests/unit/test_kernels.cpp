#include <doctest.h>

#include <omp.h>

#include <random>

#include "hardy/kernels.hpp"

using namespace hardy;

namespace {

struct Setup {
  SpacePtr space;
  BoundaryPartition part;
  std::vector<double> u;
};

Setup square(double h, std::uint64_t seed) {
  const auto d = Domain::polygon({{0, 0}, {1, 0}, {1, 1}, {0, 1}});
  Setup s;
  s.space = Space::triangles(d, build_polygon_mesh(*d.as<ConvexPolygon>(), h, {0}, 0.2));
  s.part = BoundaryPartition(d, {BoundaryCondition::dirichlet(), BoundaryCondition::robin(1.0),
                                 BoundaryCondition::robin(2.0), BoundaryCondition::robin(0.5)});
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  for (int i = 0; i < s.space->node_count(); ++i) s.u.push_back(U(rng));
  return s;
}

}  // namespace

TEST_CASE("serial and parallel kernels agree") {
  const auto s = square(1.0 / 48, 1);
  for (double p : {1.5, 2.0, 3.0}) {
    const auto a = make_assembly(s.space, s.part, build_weight(*s.space, s.part, p), p);
    const Terms ts = kernels::serial::evaluate(a, s.u);
    const Terms tp = kernels::parallel::evaluate(a, s.u);
    CHECK(tp.energy == doctest::Approx(ts.energy).epsilon(1e-13));
    CHECK(tp.boundary == doctest::Approx(ts.boundary).epsilon(1e-13));
    CHECK(tp.norm == doctest::Approx(ts.norm).epsilon(1e-13));

    const std::size_t n = s.u.size();
    std::vector<double> gn_s(n), gd_s(n), gn_p(n), gd_p(n);
    kernels::serial::gradients(a, s.u, gn_s, gd_s);
    kernels::parallel::gradients(a, s.u, gn_p, gd_p);
    double mn = 0.0, md = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      mn = std::max(mn, std::abs(gn_s[i]));
      md = std::max(md, std::abs(gd_s[i]));
    }
    for (std::size_t i = 0; i < n; ++i) {
      CHECK(std::abs(gn_p[i] - gn_s[i]) <= 1e-13 * mn);
      CHECK(std::abs(gd_p[i] - gd_s[i]) <= 1e-13 * md);
    }
  }
}

TEST_CASE("parallel kernels do not depend on the thread count") {
  const auto s = square(1.0 / 48, 2);
  const auto a = make_assembly(s.space, s.part, build_weight(*s.space, s.part, 2.5), 2.5);
  const int saved = omp_get_max_threads();
  omp_set_num_threads(1);
  const Terms t1 = kernels::parallel::evaluate(a, s.u);
  std::vector<double> g1(s.u.size()), d1(s.u.size());
  kernels::parallel::gradients(a, s.u, g1, d1);
  for (int threads : {2, 3, 8}) {
    omp_set_num_threads(threads);
    const Terms t = kernels::parallel::evaluate(a, s.u);
    CHECK(t.energy == t1.energy);
    CHECK(t.boundary == t1.boundary);
    CHECK(t.norm == t1.norm);
    std::vector<double> g(s.u.size()), d(s.u.size());
    kernels::parallel::gradients(a, s.u, g, d);
    CHECK(g == g1);
    CHECK(d == d1);
  }
  omp_set_num_threads(saved);
}

TEST_CASE("regularisation is tiny relative to the energy scale") {
  const auto s = square(0.25, 3);
  const auto a = make_assembly(s.space, s.part, build_weight(*s.space, s.part, 1.5), 1.5);
  std::vector<double> g2;
  for (const auto& c : s.space->cells()) {
    double gx, gy;
    g2.push_back(kernels::cell_grad_sq(c, s.u, gx, gy));
  }
  const double eps2 = kernels::regularisation_eps2(a, g2);
  CHECK(eps2 > 0.0);
  CHECK(std::sqrt(eps2) < 1e-10);
}
