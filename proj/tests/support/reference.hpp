#pragma once

// Reference values computed without the library: closed forms and Boost
// quadrature. Tests compare library output against these.

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/tools/roots.hpp>
#include <boost/numeric/odeint.hpp>

#include <algorithm>
#include <array>
#include <cstdint>
#include <cmath>
#include <functional>
#include <vector>

namespace ref {

inline double integrate(const std::function<double(double)>& f, double a, double b, double tol = 1e-12) {
  if (!(b > a)) return 0.0;
  // mapped to [0, 1]: the error estimate is unreliable on panels of width ~1e-90
  const double h = b - a;
  return h * boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
                 [&](double l) { return f(a + l * h); }, 0.0, 1.0, 10, tol);
}

inline double cp(double p) { return std::pow((p - 1.0) / p, p); }

inline double alpha(double p, double sigma) {
  if (std::isinf(sigma)) return 0.0;
  return (p - 1.0) / p * std::pow(sigma, 1.0 / (1.0 - p));
}

/// int_0^R s^{n-1} / (R + alpha - s) ds.
inline double ball_integral(int n, double R, double a) {
  return integrate([&](double s) { return std::pow(s, n - 1) / (R + a - s); }, 0.0, R);
}

inline double ball_bound(int n, double p, double sigma, double R) {
  const double a = alpha(p, sigma);
  return cp(p) + sigma * std::pow(a, p - 1.0) * std::pow(R, n - 1) / ball_integral(n, R, a);
}

/// Quotient of a piecewise-linear function on [a, b] with Robin (or Dirichlet,
/// sigma = inf) ends and Hardy weight (delta + alpha)^{-p}, alpha per nearest end.
struct Interval1D {
  double a = 0.0, b = 1.0;
  double sigma_a = INFINITY, sigma_b = INFINITY;
  double p = 2.0;

  double weight(double t) const {
    const double da = t - a, db = b - t;
    if (da <= db) return std::pow(da + alpha(p, sigma_a), -p);
    return std::pow(db + alpha(p, sigma_b), -p);
  }

  double energy(const std::vector<double>& x, const std::vector<double>& u) const {
    double e = 0.0;
    for (std::size_t i = 0; i + 1 < x.size(); ++i)
      e += std::pow(std::abs((u[i + 1] - u[i]) / (x[i + 1] - x[i])), p) * (x[i + 1] - x[i]);
    return e;
  }

  double boundary(const std::vector<double>& u) const {
    double s = 0.0;
    if (!std::isinf(sigma_a)) s += sigma_a * std::pow(std::abs(u.front()), p);
    if (!std::isinf(sigma_b)) s += sigma_b * std::pow(std::abs(u.back()), p);
    return s;
  }

  double norm(const std::vector<double>& x, const std::vector<double>& u) const {
    const double mid = 0.5 * (a + b);
    double s = 0.0;
    for (std::size_t i = 0; i + 1 < x.size(); ++i) {
      if (u[i] == 0.0 && u[i + 1] == 0.0) continue;
      auto f = [&](double t) {
        const double l = (t - x[i]) / (x[i + 1] - x[i]);
        return std::pow(std::abs((1 - l) * u[i] + l * u[i + 1]), p) * weight(t);
      };
      // split at the midpoint where the weight has a kink
      if (x[i] < mid && mid < x[i + 1]) s += integrate(f, x[i], mid) + integrate(f, mid, x[i + 1]);
      else s += integrate(f, x[i], x[i + 1]);
    }
    return s;
  }

  double quotient(const std::vector<double>& x, const std::vector<double>& u) const {
    return (energy(x, u) + boundary(u)) / norm(x, u);
  }
};

/// Continuum quotient on [0, 1], Dirichlet at 0 and weight t^{-2}-type near 0, of
/// the concentrating profile anchored at 0 with plateau radius r (2 eps < r so
/// the exponent is eps + 1 - 1/p on the whole support).
inline double u_eps_continuum(double eps, double p) {
  const double e = eps + 1.0 - 1.0 / p;
  const double top = std::pow(eps, e);
  // on [0, eps] both integrands are multiples of t^{p eps - 1}; a quarter of the
  // mass at eps = 1e-3 sits below 1e-300, so this part is done in closed form
  const double core = std::pow(eps, p * eps) / (p * eps);
  const double en = std::pow(e, p) * core + std::pow(top / eps, p) * eps;
  const double nm = core + integrate([&](double t) { return std::pow(top * (2 * eps - t) / (eps * t), p); }, eps, 2 * eps);
  return en / nm;
}

/// Quotient of u_k = (1 - log(r/R)/K)_+ at p = n by quadrature in s = log(r/R).
inline double uk_by_quadrature(double K, double R, double sigma, int n) {
  const double num = std::pow(K, 1.0 - n) + sigma * std::pow(R, n - 1);
  const double den = integrate([&](double s) { return std::pow(1.0 - s / K, n); }, 0.0, K);
  return num / den;
}

/// Radial quotient with weight |x|^{-p} of a profile linear in s on a log grid,
/// continued as a constant beyond the last node (p > n) by a closed-form tail.
inline double radial_quotient_log(int n, double p, double R, double sigma, const std::vector<double>& s,
                                  const std::vector<double>& f, bool constant_tail) {
  double num = sigma * std::pow(R, n - 1) * std::pow(std::abs(f.front()), p);
  double den = 0.0;
  for (std::size_t i = 0; i + 1 < s.size(); ++i) {
    const double h = s[i + 1] - s[i];
    const double slope = (f[i + 1] - f[i]) / h;  // df/ds
    // |f'(r)|^p r^{n-1} dr = |df/ds|^p r^{n-p} ds
    num += integrate([&](double t) { return std::pow(std::abs(slope), p) * std::pow(R * std::exp(t), n - p); },
                     s[i], s[i + 1]);
    den += integrate(
        [&](double t) {
          const double v = f[i] + slope * (t - s[i]);
          return std::pow(std::abs(v), p) * std::pow(R * std::exp(t), n - p);
        },
        s[i], s[i + 1]);
  }
  if (constant_tail) {
    const double rho = R * std::exp(s.back());
    den += std::pow(std::abs(f.back()), p) * std::pow(rho, n - p) / (p - n);
  }
  return num / den;
}

/// Smallest eigenvalue of -u'' = lambda u / (min(t, 1 - t) + alpha)^2 on [0, 1]
/// with u'(0) = sigma u(0) and the mirror condition at 1 (p = 2). Shooting on
/// [0, 1/2] for u'(1/2) = 0; the first sign change above 1/4 is refined by TOMS 748.
inline double robin_interval_lambda(double sigma) {
  namespace ode = boost::numeric::odeint;
  const double a = alpha(2.0, sigma);
  auto slope_at_mid = [&](double lam) {
    std::array<double, 2> y{1.0, sigma};
    auto rhs = [&](const std::array<double, 2>& v, std::array<double, 2>& dv, double t) {
      dv[0] = v[1];
      dv[1] = -lam * v[0] / ((t + a) * (t + a));
    };
    ode::integrate_adaptive(ode::make_controlled<ode::runge_kutta_dopri5<std::array<double, 2>>>(1e-14, 1e-12), rhs,
                            y, 0.0, 0.5, a);
    return y[1];
  };
  double lo = 0.25 + 1e-9, flo = slope_at_mid(lo);
  for (double hi = lo + 1e-3;; hi += 1e-3) {
    const double fhi = slope_at_mid(hi);
    if ((flo < 0) != (fhi < 0)) {
      std::uintmax_t iters = 200;
      auto r = boost::math::tools::toms748_solve(slope_at_mid, lo, hi, flo, fhi,
                                                 boost::math::tools::eps_tolerance<double>(40), iters);
      return 0.5 * (r.first + r.second);
    }
    lo = hi;
    flo = fhi;
  }
}

}  // namespace ref
