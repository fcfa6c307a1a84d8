#include "delaunay.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <stdexcept>

#include <boost/multiprecision/cpp_int.hpp>

namespace hardy::detail {

namespace {

using Rational = boost::multiprecision::cpp_rational;

constexpr double kEps = 1.1102230246251565e-16;  // 2^-53
constexpr double kOrientBound = (3.0 + 16.0 * kEps) * kEps;
constexpr double kIncircleBound = (10.0 + 96.0 * kEps) * kEps;

int sign_of(const Rational& r) { return r > 0 ? 1 : (r < 0 ? -1 : 0); }

int orient_exact(Vec2 a, Vec2 b, Vec2 c) {
  const Rational ax(a.x), ay(a.y), bx(b.x), by(b.y), cx(c.x), cy(c.y);
  return sign_of((bx - ax) * (cy - ay) - (by - ay) * (cx - ax));
}

int incircle_exact(Vec2 a, Vec2 b, Vec2 c, Vec2 d) {
  const Rational dx(d.x), dy(d.y);
  const Rational adx = Rational(a.x) - dx, ady = Rational(a.y) - dy;
  const Rational bdx = Rational(b.x) - dx, bdy = Rational(b.y) - dy;
  const Rational cdx = Rational(c.x) - dx, cdy = Rational(c.y) - dy;
  const Rational alift = adx * adx + ady * ady;
  const Rational blift = bdx * bdx + bdy * bdy;
  const Rational clift = cdx * cdx + cdy * cdy;
  const Rational det = alift * (bdx * cdy - cdx * bdy) + blift * (cdx * ady - adx * cdy) +
                       clift * (adx * bdy - bdx * ady);
  return sign_of(det);
}

}  // namespace

int orient2d(Vec2 a, Vec2 b, Vec2 c) {
  const double l = (b.x - a.x) * (c.y - a.y);
  const double r = (b.y - a.y) * (c.x - a.x);
  const double det = l - r;
  const double bound = kOrientBound * (std::abs(l) + std::abs(r));
  if (det > bound) return 1;
  if (-det > bound) return -1;
  return orient_exact(a, b, c);
}

int incircle(Vec2 a, Vec2 b, Vec2 c, Vec2 d) {
  const double adx = a.x - d.x, ady = a.y - d.y;
  const double bdx = b.x - d.x, bdy = b.y - d.y;
  const double cdx = c.x - d.x, cdy = c.y - d.y;
  const double bdxcdy = bdx * cdy, cdxbdy = cdx * bdy;
  const double cdxady = cdx * ady, adxcdy = adx * cdy;
  const double adxbdy = adx * bdy, bdxady = bdx * ady;
  const double alift = adx * adx + ady * ady;
  const double blift = bdx * bdx + bdy * bdy;
  const double clift = cdx * cdx + cdy * cdy;
  const double det = alift * (bdxcdy - cdxbdy) + blift * (cdxady - adxcdy) + clift * (adxbdy - bdxady);
  const double perm = (std::abs(bdxcdy) + std::abs(cdxbdy)) * alift +
                      (std::abs(cdxady) + std::abs(adxcdy)) * blift +
                      (std::abs(adxbdy) + std::abs(bdxady)) * clift;
  const double bound = kIncircleBound * perm;
  if (det > bound) return 1;
  if (-det > bound) return -1;
  // The double-precision differences above are inexact; redo everything exactly.
  return incircle_exact(a, b, c, d);
}

namespace {

std::uint64_t hilbert_index(std::uint32_t x, std::uint32_t y, int order) {
  const std::uint32_t n = 1u << order;
  std::uint64_t d = 0;
  for (std::uint32_t s = n / 2; s > 0; s /= 2) {
    const std::uint32_t rx = (x & s) ? 1 : 0;
    const std::uint32_t ry = (y & s) ? 1 : 0;
    d += static_cast<std::uint64_t>(s) * s * ((3 * rx) ^ ry);
    if (ry == 0) {
      if (rx == 1) {
        x = n - 1 - x;
        y = n - 1 - y;
      }
      std::swap(x, y);
    }
  }
  return d;
}

struct Tri {
  std::array<int, 3> v{};
  std::array<int, 3> n{-1, -1, -1};  // n[i] is across the edge opposite v[i]
  bool alive = true;
};

class Triangulator {
 public:
  explicit Triangulator(const std::vector<Vec2>& pts) : pts_(pts) {
    double xmin = pts[0].x, xmax = xmin, ymin = pts[0].y, ymax = ymin;
    for (const auto& p : pts) {
      xmin = std::min(xmin, p.x);
      xmax = std::max(xmax, p.x);
      ymin = std::min(ymin, p.y);
      ymax = std::max(ymax, p.y);
    }
    const double D = std::max(xmax - xmin, ymax - ymin);
    const Vec2 c{0.5 * (xmin + xmax), 0.5 * (ymin + ymax)};
    super_ = static_cast<int>(pts_.size());
    pts_.push_back({c.x - 4.0e5 * D, c.y - 3.0e5 * D});
    pts_.push_back({c.x + 4.0e5 * D, c.y - 3.0e5 * D});
    pts_.push_back({c.x, c.y + 4.0e5 * D});
    tris_.push_back(Tri{{super_, super_ + 1, super_ + 2}, {-1, -1, -1}, true});
  }

  void insert(int ip) {
    const Vec2 p = pts_[ip];
    const int start = locate(p);
    // Cavity: triangles whose circumcircle strictly contains p, grown from the container.
    cavity_.clear();
    stamp_++;
    if (mark_.size() < tris_.size()) mark_.resize(tris_.size(), 0);
    std::vector<int> stack{start};
    mark_[start] = stamp_;
    while (!stack.empty()) {
      const int t = stack.back();
      stack.pop_back();
      cavity_.push_back(t);
      for (int k = 0; k < 3; ++k) {
        const int nb = tris_[t].n[k];
        if (nb < 0 || mark_[nb] == stamp_) continue;
        const auto& v = tris_[nb].v;
        if (incircle(pts_[v[0]], pts_[v[1]], pts_[v[2]], p) > 0) {
          mark_[nb] = stamp_;
          stack.push_back(nb);
        }
      }
    }
    make_star_shaped(start, p);

    // Boundary edges of the cavity, each (a, b) counter-clockwise as seen from p.
    struct Edge {
      int a, b, outside, owner;
    };
    std::vector<Edge> edges;
    for (int t : cavity_) {
      for (int k = 0; k < 3; ++k) {
        const int nb = tris_[t].n[k];
        if (nb >= 0 && mark_[nb] == stamp_) continue;
        edges.push_back({tris_[t].v[(k + 1) % 3], tris_[t].v[(k + 2) % 3], nb, t});
      }
    }
    for (int t : cavity_) tris_[t].alive = false;
    std::vector<int> created;
    created.reserve(edges.size());
    for (const auto& e : edges) {
      const int id = allocate();
      tris_[id] = Tri{{ip, e.a, e.b}, {e.outside, -1, -1}, true};
      if (e.outside >= 0) {
        auto& o = tris_[e.outside];
        for (int k = 0; k < 3; ++k)
          if (o.v[(k + 1) % 3] == e.b && o.v[(k + 2) % 3] == e.a) o.n[k] = id;
      }
      created.push_back(id);
    }
    // Slots of the cavity are recycled only after the fan is linked.
    free_.insert(free_.end(), cavity_.begin(), cavity_.end());
    // Link the fan: edge (b, p) of (p, a, b) meets the triangle starting at b.
    for (int id : created) {
      auto& t = tris_[id];
      for (int other : created) {
        if (other == id) continue;
        const auto& o = tris_[other];
        if (o.v[1] == t.v[2]) t.n[1] = other;
        if (o.v[2] == t.v[1]) t.n[2] = other;
      }
    }
    last_ = created.front();
  }

  std::vector<std::array<int, 3>> result() const {
    std::vector<std::array<int, 3>> out;
    for (const auto& t : tris_) {
      if (!t.alive) continue;
      if (t.v[0] >= super_ || t.v[1] >= super_ || t.v[2] >= super_) continue;
      out.push_back(t.v);
    }
    return out;
  }

 private:
  int allocate() {
    if (!free_.empty()) {
      const int id = free_.back();
      free_.pop_back();
      return id;
    }
    tris_.emplace_back();
    mark_.push_back(0);
    return static_cast<int>(tris_.size()) - 1;
  }

  int locate(Vec2 p) const {
    int t = last_;
    if (t < 0 || t >= static_cast<int>(tris_.size()) || !tris_[t].alive) {
      t = 0;
      while (!tris_[t].alive) ++t;
    }
    int rot = 0;
    for (std::size_t steps = 0; steps < 4 * tris_.size() + 16; ++steps) {
      const auto& tr = tris_[t];
      bool moved = false;
      for (int j = 0; j < 3; ++j) {
        const int k = (j + rot) % 3;
        const Vec2 a = pts_[tr.v[(k + 1) % 3]];
        const Vec2 b = pts_[tr.v[(k + 2) % 3]];
        if (orient2d(a, b, p) < 0 && tr.n[k] >= 0) {
          t = tr.n[k];
          moved = true;
          break;
        }
      }
      if (!moved) return t;
      rot = (rot + 1) % 3;
    }
    throw std::runtime_error("delaunay: point location failed");
  }

  /// Remove cavity triangles whose outer edges are not strictly visible from p,
  /// keeping the cavity connected to the containing triangle.
  void make_star_shaped(int start, Vec2 p) {
    for (bool changed = true; changed;) {
      changed = false;
      for (int t : cavity_) {
        if (t == start || mark_[t] != stamp_) continue;
        for (int k = 0; k < 3; ++k) {
          const int nb = tris_[t].n[k];
          if (nb >= 0 && mark_[nb] == stamp_) continue;
          const Vec2 a = pts_[tris_[t].v[(k + 1) % 3]];
          const Vec2 b = pts_[tris_[t].v[(k + 2) % 3]];
          if (orient2d(a, b, p) <= 0) {
            mark_[t] = 0;
            changed = true;
            break;
          }
        }
      }
      if (!changed) break;
      // Re-grow from the container through the surviving marks.
      std::vector<int> keep;
      const int old = stamp_;
      stamp_++;
      std::vector<int> stack{start};
      mark_[start] = stamp_;
      while (!stack.empty()) {
        const int t = stack.back();
        stack.pop_back();
        keep.push_back(t);
        for (int k = 0; k < 3; ++k) {
          const int nb = tris_[t].n[k];
          if (nb >= 0 && mark_[nb] == old) {
            mark_[nb] = stamp_;
            stack.push_back(nb);
          }
        }
      }
      cavity_ = std::move(keep);
    }
  }

  std::vector<Vec2> pts_;
  std::vector<Tri> tris_;
  std::vector<int> free_;
  std::vector<int> cavity_;
  std::vector<int> mark_;
  int stamp_ = 0;
  int super_ = 0;
  int last_ = 0;
};

}  // namespace

std::vector<std::array<int, 3>> delaunay(const std::vector<Vec2>& points) {
  if (points.size() < 3) throw std::invalid_argument("delaunay needs at least 3 points");
  double xmin = points[0].x, xmax = xmin, ymin = points[0].y, ymax = ymin;
  for (const auto& p : points) {
    xmin = std::min(xmin, p.x);
    xmax = std::max(xmax, p.x);
    ymin = std::min(ymin, p.y);
    ymax = std::max(ymax, p.y);
  }
  const double span = std::max({xmax - xmin, ymax - ymin, 1e-300});
  constexpr int order = 16;
  const double cells = static_cast<double>((1u << order) - 1);
  std::vector<std::uint64_t> key(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    const auto x = static_cast<std::uint32_t>((points[i].x - xmin) / span * cells);
    const auto y = static_cast<std::uint32_t>((points[i].y - ymin) / span * cells);
    key[i] = hilbert_index(x, y, order);
  }
  std::vector<int> order_idx(points.size());
  std::iota(order_idx.begin(), order_idx.end(), 0);
  std::stable_sort(order_idx.begin(), order_idx.end(), [&](int a, int b) { return key[a] < key[b]; });

  Triangulator tri(points);
  for (int i : order_idx) tri.insert(i);
  return tri.result();
}

}  // namespace hardy::detail
