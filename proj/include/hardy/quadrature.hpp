#pragma once

#include <array>
#include <functional>

namespace hardy::quad {

/// Gauss-Legendre 5-point rule on [-1, 1]; exact for polynomials of degree 9.
struct Gauss5 {
  static constexpr int size = 5;
  static const std::array<double, 5> nodes;
  static const std::array<double, 5> weights;
};

/// Symmetric 7-point degree-5 rule on the reference triangle, barycentric
/// coordinates; weights sum to 1 (multiply by the triangle area).
struct Triangle7 {
  static constexpr int size = 7;
  static const std::array<std::array<double, 3>, 7> barycentric;
  static const std::array<double, 7> weights;
};

/// Composite 5-point Gauss on [a, b].
double gauss5(const std::function<double(double)>& f, double a, double b, int panels = 1);

/// Adaptive 5-point Gauss: a panel is accepted once one rule and the two-half
/// rule agree to `rel_tol` relative to the running total (or `abs_tol`).
double adaptive_gauss5(const std::function<double(double)>& f, double a, double b,
                       double rel_tol = 1e-12, double abs_tol = 0.0, int max_depth = 60);

}  // namespace hardy::quad
