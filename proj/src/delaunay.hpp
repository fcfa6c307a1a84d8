#pragma once

#include <array>
#include <vector>

#include "hardy/geometry.hpp"

namespace hardy::detail {

/// Sign of the orientation determinant of (a, b, c): +1 counter-clockwise.
/// Filtered in double precision, exact (rational) when the filter is inconclusive.
int orient2d(Vec2 a, Vec2 b, Vec2 c);

/// +1 when d lies strictly inside the circle through counter-clockwise a, b, c.
int incircle(Vec2 a, Vec2 b, Vec2 c, Vec2 d);

/// Delaunay triangulation of the convex hull of `points` (Bowyer-Watson with
/// deterministic Hilbert insertion order). Triangles are counter-clockwise.
std::vector<std::array<int, 3>> delaunay(const std::vector<Vec2>& points);

}  // namespace hardy::detail
