#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <unordered_map>

#include "delaunay.hpp"
#include "hardy/errors.hpp"
#include "hardy/mesh.hpp"

namespace hardy {

double TriMesh::total_area() const {
  double s = 0.0;
  for (const auto& t : triangles)
    s += 0.5 * cross(vertices[t[1]] - vertices[t[0]], vertices[t[2]] - vertices[t[0]]);
  return s;
}

double TriMesh::min_angle_degrees() const {
  double best = 180.0;
  for (const auto& t : triangles) {
    for (int k = 0; k < 3; ++k) {
      const Vec2 o = vertices[t[k]];
      const Vec2 u = vertices[t[(k + 1) % 3]] - o;
      const Vec2 v = vertices[t[(k + 2) % 3]] - o;
      const double ang = std::atan2(std::abs(cross(u, v)), dot(u, v));
      best = std::min(best, ang * 180.0 / std::numbers::pi);
    }
  }
  return best;
}

double TriMesh::boundary_length() const {
  double s = 0.0;
  for (const auto& e : boundary_edges) s += norm(vertices[e.v1] - vertices[e.v0]);
  return s;
}

double TriMesh::max_edge() const {
  double m = 0.0;
  for (const auto& t : triangles)
    for (int k = 0; k < 3; ++k) m = std::max(m, norm(vertices[t[(k + 1) % 3]] - vertices[t[k]]));
  return m;
}

namespace {

struct SizeField {
  const ConvexPolygon* poly;
  std::vector<int> graded;
  double h, hf, depth;
  static constexpr double kGrowth = 0.3;

  double operator()(Vec2 x) const {
    if (graded.empty()) return h;
    double d = std::numeric_limits<double>::infinity();
    for (int e : graded) d = std::min(d, edge_segment_distance(*poly, e, x));
    if (d <= depth) return hf;
    return std::min(h, hf + kGrowth * (d - depth));
  }
};

/// Uniform hash grid for separation queries.
class PointGrid {
 public:
  PointGrid(Vec2 lo, double cell) : lo_(lo), cell_(cell) {}

  void add(Vec2 p) { buckets_[key(p)].push_back(p); }

  bool any_within(Vec2 p, double r) const {
    const auto [ci, cj] = coords(p);
    const int reach = static_cast<int>(std::ceil(r / cell_));
    for (int i = ci - reach; i <= ci + reach; ++i)
      for (int j = cj - reach; j <= cj + reach; ++j) {
        auto it = buckets_.find(pack(i, j));
        if (it == buckets_.end()) continue;
        for (const auto& q : it->second)
          if (norm(q - p) < r) return true;
      }
    return false;
  }

 private:
  std::pair<int, int> coords(Vec2 p) const {
    return {static_cast<int>(std::floor((p.x - lo_.x) / cell_)),
            static_cast<int>(std::floor((p.y - lo_.y) / cell_))};
  }
  static long long pack(int i, int j) { return (static_cast<long long>(i) << 32) ^ static_cast<unsigned>(j); }
  long long key(Vec2 p) const {
    const auto [i, j] = coords(p);
    return pack(i, j);
  }
  Vec2 lo_;
  double cell_;
  std::unordered_map<long long, std::vector<Vec2>> buckets_;
};

double distance_to_polygon(const ConvexPolygon& poly, Vec2 x) {
  double d = std::numeric_limits<double>::infinity();
  for (int e = 0; e < static_cast<int>(poly.vertices.size()); ++e)
    d = std::min(d, edge_line_distance(poly, e, x));
  return d;
}

/// Points on the polygon boundary, equidistributed in the size metric per edge.
/// `tags[i]` lists the polygon edges containing point i.
void boundary_points(const ConvexPolygon& poly, const SizeField& size, std::vector<Vec2>& pts,
                     std::vector<std::vector<int>>& tags) {
  const int nv = static_cast<int>(poly.vertices.size());
  for (int i = 0; i < nv; ++i) {
    pts.push_back(poly.vertices[i]);
    tags.push_back({(i + nv - 1) % nv, i});
  }
  for (int e = 0; e < nv; ++e) {
    const Vec2 a = poly.vertices[e], b = poly.vertices[(e + 1) % nv];
    const double len = norm(b - a);
    const int K = std::max(64, static_cast<int>(std::ceil(8.0 * len / size.hf)));
    std::vector<double> cum(K + 1, 0.0);
    for (int k = 0; k < K; ++k) {
      const double t0 = static_cast<double>(k) / K, t1 = static_cast<double>(k + 1) / K;
      const double g0 = 1.0 / size(a + t0 * (b - a)), g1 = 1.0 / size(a + t1 * (b - a));
      cum[k + 1] = cum[k] + 0.5 * (g0 + g1) * (t1 - t0) * len;
    }
    const int m = std::max(1, static_cast<int>(std::lround(cum[K])));
    int k = 0;
    for (int j = 1; j < m; ++j) {
      const double target = cum[K] * static_cast<double>(j) / m;
      while (k < K - 1 && cum[k + 1] < target) ++k;
      const double frac = (target - cum[k]) / (cum[k + 1] - cum[k]);
      const double t = (k + frac) / K;
      pts.push_back(a + t * (b - a));
      tags.push_back({e});
    }
  }
}

struct Candidate {
  Vec2 p;
  double size;
  int row, col;
};

std::vector<Vec2> interior_points(const ConvexPolygon& poly, const SizeField& size,
                                  const std::vector<Vec2>& boundary) {
  double xmin = poly.vertices[0].x, xmax = xmin, ymin = poly.vertices[0].y, ymax = ymin;
  for (const auto& v : poly.vertices) {
    xmin = std::min(xmin, v.x);
    xmax = std::max(xmax, v.x);
    ymin = std::min(ymin, v.y);
    ymax = std::max(ymax, v.y);
  }
  const double c = 0.5 * size.hf;
  const double dy = c * std::sqrt(3.0) / 2.0;
  std::vector<Candidate> cand;
  const int rows = static_cast<int>(std::ceil((ymax - ymin) / dy)) + 1;
  const int cols = static_cast<int>(std::ceil((xmax - xmin) / c)) + 2;
  for (int r = 0; r < rows; ++r) {
    for (int q = 0; q < cols; ++q) {
      const Vec2 p{xmin + (q + 0.5 * (r % 2)) * c, ymin + r * dy};
      const double d = distance_to_polygon(poly, p);
      const double s = size(p);
      if (d < 0.6 * s) continue;
      cand.push_back({p, s, r, q});
    }
  }
  std::stable_sort(cand.begin(), cand.end(), [](const Candidate& a, const Candidate& b) {
    if (a.size != b.size) return a.size < b.size;
    if (a.row != b.row) return a.row < b.row;
    return a.col < b.col;
  });
  PointGrid grid({xmin, ymin}, size.hf);
  for (const auto& b : boundary) grid.add(b);
  std::vector<Vec2> out;
  for (const auto& cd : cand) {
    if (grid.any_within(cd.p, 0.85 * cd.size)) continue;
    grid.add(cd.p);
    out.push_back(cd.p);
  }
  return out;
}

/// Laplacian smoothing of interior points toward their Delaunay neighbours,
/// rejecting moves that come too close to the boundary.
void smooth(const ConvexPolygon& poly, const SizeField& size, std::vector<Vec2>& pts, int first_interior,
            const std::vector<std::array<int, 3>>& tris) {
  const int n = static_cast<int>(pts.size());
  std::vector<Vec2> sum(n, Vec2{0.0, 0.0});
  std::vector<int> cnt(n, 0);
  for (const auto& t : tris)
    for (int k = 0; k < 3; ++k) {
      const int i = t[k];
      for (int j = 1; j < 3; ++j) {
        sum[i] = sum[i] + pts[t[(k + j) % 3]];
        cnt[i]++;
      }
    }
  for (int i = first_interior; i < n; ++i) {
    if (cnt[i] == 0) continue;
    const Vec2 target = (1.0 / cnt[i]) * sum[i];
    if (distance_to_polygon(poly, target) >= 0.3 * size(target)) pts[i] = target;
  }
}

/// Boundary points are rounded onto their edge, so three of them can form a
/// sliver. Flip each sliver against its inner neighbour, or drop it when it
/// sits on the hull.
void remove_boundary_slivers(const std::vector<Vec2>& pts, const std::vector<std::vector<int>>& tags,
                             std::vector<std::array<int, 3>>& tris) {
  auto shared_tag = [&](const std::array<int, 3>& t) {
    for (int i : t)
      if (i >= static_cast<int>(tags.size())) return false;
    for (int e : tags[t[0]]) {
      const auto has = [e](const std::vector<int>& v) { return std::find(v.begin(), v.end(), e) != v.end(); };
      if (has(tags[t[1]]) && has(tags[t[2]])) return true;
    }
    return false;
  };
  for (bool again = true; again;) {
    again = false;
    for (std::size_t ti = 0; ti < tris.size(); ++ti) {
      const auto t = tris[ti];
      if (!shared_tag(t)) continue;
      // Longest edge (u, w) of the sliver; v is the middle point.
      int k = 0;
      double best = -1.0;
      for (int j = 0; j < 3; ++j) {
        const double len = norm(pts[t[(j + 2) % 3]] - pts[t[(j + 1) % 3]]);
        if (len > best) best = len, k = j;
      }
      const int v = t[k], u = t[(k + 1) % 3], w = t[(k + 2) % 3];
      std::size_t nb = tris.size();
      int x = -1;
      for (std::size_t tj = 0; tj < tris.size() && nb == tris.size(); ++tj) {
        if (tj == ti) continue;
        for (int j = 0; j < 3; ++j)
          if (tris[tj][(j + 1) % 3] == w && tris[tj][(j + 2) % 3] == u) {
            nb = tj;
            x = tris[tj][j];
          }
      }
      if (nb == tris.size()) {
        tris.erase(tris.begin() + static_cast<std::ptrdiff_t>(ti));
      } else {
        tris[ti] = {v, u, x};
        tris[nb] = {v, x, w};
      }
      again = true;
      break;
    }
  }
}

}  // namespace

TriMesh build_polygon_mesh(const ConvexPolygon& domain, double h, const std::vector<int>& grade_near,
                           double grade_depth) {
  const int nv = static_cast<int>(domain.vertices.size());
  if (nv < 3) throw DomainError("polygon needs at least 3 vertices");
  for (int i = 0; i < nv; ++i) {
    const Vec2 a = domain.vertices[i], b = domain.vertices[(i + 1) % nv], c = domain.vertices[(i + 2) % nv];
    if (!(cross(b - a, c - b) > 0.0)) throw DomainError("polygon must be strictly convex and counter-clockwise");
  }
  if (!(h > 0.0) || !std::isfinite(h)) throw ParameterError("mesh size h must be positive");
  if (!(grade_depth >= 0.0)) throw ParameterError("grade_depth must be nonnegative");
  for (int e : grade_near)
    if (e < 0 || e >= nv) throw ParameterError("grade_near lists an unknown edge");

  SizeField size{&domain, grade_near, h, grade_near.empty() ? h : 0.25 * h, grade_depth};
  std::sort(size.graded.begin(), size.graded.end());
  size.graded.erase(std::unique(size.graded.begin(), size.graded.end()), size.graded.end());

  std::vector<Vec2> pts;
  std::vector<std::vector<int>> tags;
  boundary_points(domain, size, pts, tags);
  const int first_interior = static_cast<int>(pts.size());
  const auto inner = interior_points(domain, size, pts);
  pts.insert(pts.end(), inner.begin(), inner.end());

  auto tris = detail::delaunay(pts);
  for (int pass = 0; pass < 3 && first_interior < static_cast<int>(pts.size()); ++pass) {
    smooth(domain, size, pts, first_interior, tris);
    tris = detail::delaunay(pts);
  }
  remove_boundary_slivers(pts, tags, tris);

  TriMesh mesh;
  mesh.vertices = pts;
  mesh.triangles = std::move(tris);

  // Edges with a single incident triangle lie on the boundary.
  std::map<std::pair<int, int>, int> count;
  for (const auto& t : mesh.triangles)
    for (int k = 0; k < 3; ++k) {
      const int a = t[k], b = t[(k + 1) % 3];
      count[{std::min(a, b), std::max(a, b)}]++;
    }
  for (const auto& t : mesh.triangles)
    for (int k = 0; k < 3; ++k) {
      const int a = t[k], b = t[(k + 1) % 3];
      if (count[{std::min(a, b), std::max(a, b)}] != 1) continue;
      if (a >= first_interior || b >= first_interior)
        throw NumericalError("polygon mesher: interior point on the hull");
      int piece = -1;
      for (int ea : tags[a])
        for (int eb : tags[b])
          if (ea == eb) piece = ea;
      if (piece < 0) throw NumericalError("polygon mesher: untagged boundary edge");
      mesh.boundary_edges.push_back({a, b, piece});
    }

  const double area = polygon_area(domain);
  if (std::abs(mesh.total_area() - area) > 1e-10 * area)
    throw NumericalError("polygon mesher: area not conserved");
  return mesh;
}

TriMesh refine_uniform(const TriMesh& mesh) {
  std::vector<std::array<int, 2>> parents;
  return refine_uniform(mesh, parents);
}

TriMesh refine_uniform(const TriMesh& mesh, std::vector<std::array<int, 2>>& parents) {
  TriMesh out;
  parents.clear();
  for (int i = 0; i < static_cast<int>(mesh.vertices.size()); ++i) parents.push_back({i, i});
  out.vertices = mesh.vertices;
  std::map<std::pair<int, int>, int> mid;
  auto midpoint = [&](int a, int b) {
    const std::pair<int, int> key{std::min(a, b), std::max(a, b)};
    auto it = mid.find(key);
    if (it != mid.end()) return it->second;
    const int id = static_cast<int>(out.vertices.size());
    out.vertices.push_back(0.5 * (mesh.vertices[a] + mesh.vertices[b]));
    parents.push_back({key.first, key.second});
    mid.emplace(key, id);
    return id;
  };
  for (const auto& t : mesh.triangles) {
    const int ab = midpoint(t[0], t[1]), bc = midpoint(t[1], t[2]), ca = midpoint(t[2], t[0]);
    out.triangles.push_back({t[0], ab, ca});
    out.triangles.push_back({ab, t[1], bc});
    out.triangles.push_back({ca, bc, t[2]});
    out.triangles.push_back({ab, bc, ca});
  }
  for (const auto& e : mesh.boundary_edges) {
    const int m = midpoint(e.v0, e.v1);
    out.boundary_edges.push_back({e.v0, m, e.piece_id});
    out.boundary_edges.push_back({m, e.v1, e.piece_id});
  }
  return out;
}

}  // namespace hardy
