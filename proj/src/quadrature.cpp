#include "hardy/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace hardy::quad {

const std::array<double, 5> Gauss5::nodes = {
    -0.9061798459386639927976269, -0.5384693101056830910363144, 0.0,
    0.5384693101056830910363144, 0.9061798459386639927976269};
const std::array<double, 5> Gauss5::weights = {
    0.2369268850561890875142640, 0.4786286704993664680412915, 0.5688888888888888888888889,
    0.4786286704993664680412915, 0.2369268850561890875142640};

namespace {
constexpr double kA1 = 0.059715871789769820459117580973143;
constexpr double kB1 = 0.470142064105115089770441209513429;
constexpr double kA2 = 0.797426985353087322398025276169754;
constexpr double kB2 = 0.101286507323456338800987361915123;
}  // namespace

const std::array<std::array<double, 3>, 7> Triangle7::barycentric = {{
    {1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0},
    {kA1, kB1, kB1},
    {kB1, kA1, kB1},
    {kB1, kB1, kA1},
    {kA2, kB2, kB2},
    {kB2, kA2, kB2},
    {kB2, kB2, kA2},
}};
const std::array<double, 7> Triangle7::weights = {
    0.225,
    0.132394152788506181334067,
    0.132394152788506181334067,
    0.132394152788506181334067,
    0.125939180544827151999266,
    0.125939180544827151999266,
    0.125939180544827151999266};

double gauss5(const std::function<double(double)>& f, double a, double b, int panels) {
  const double h = (b - a) / panels;
  double total = 0.0;
  for (int k = 0; k < panels; ++k) {
    const double lo = a + k * h;
    const double mid = lo + 0.5 * h;
    double s = 0.0;
    for (int q = 0; q < Gauss5::size; ++q) s += Gauss5::weights[q] * f(mid + 0.5 * h * Gauss5::nodes[q]);
    total += 0.5 * h * s;
  }
  return total;
}

namespace {

double refine(const std::function<double(double)>& f, double a, double b, double whole,
              double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double left = gauss5(f, a, m);
  const double right = gauss5(f, m, b);
  const double both = left + right;
  // below a few ulps of the panel value further splitting only adds roundoff
  const double floor = 64 * std::numeric_limits<double>::epsilon() * (std::abs(left) + std::abs(right));
  if (depth <= 0 || std::abs(both - whole) <= std::max(tol, floor)) return both;
  return refine(f, a, m, left, 0.5 * tol, depth - 1) + refine(f, m, b, right, 0.5 * tol, depth - 1);
}

}  // namespace

double adaptive_gauss5(const std::function<double(double)>& f, double a, double b, double rel_tol,
                       double abs_tol, int max_depth) {
  if (a == b) return 0.0;
  // A coarse composite estimate sets the scale for the relative tolerance.
  const double coarse = gauss5(f, a, b, 8);
  const double tol = std::max(abs_tol, rel_tol * std::abs(coarse));
  const double h = (b - a) / 8;
  double total = 0.0;
  for (int k = 0; k < 8; ++k) {
    const double lo = a + k * h;
    const double hi = (k == 7) ? b : lo + h;
    total += refine(f, lo, hi, gauss5(f, lo, hi), tol / 8, max_depth);
  }
  return total;
}

}  // namespace hardy::quad
