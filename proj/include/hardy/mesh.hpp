#pragma once

#include <array>
#include <vector>

#include "hardy/boundary.hpp"
#include "hardy/geometry.hpp"

namespace hardy {

/// Strictly increasing nodes on [a, b]; node 0 carries piece 0, the last node piece 1.
struct Mesh1D {
  std::vector<double> nodes;

  std::size_t cell_count() const { return nodes.empty() ? 0 : nodes.size() - 1; }
  double min_spacing() const;
};

struct BoundaryEdge {
  int v0 = 0;
  int v1 = 0;
  int piece_id = 0;
};

struct TriMesh {
  std::vector<Vec2> vertices;
  std::vector<std::array<int, 3>> triangles;  // counter-clockwise
  std::vector<BoundaryEdge> boundary_edges;

  double total_area() const;
  double min_angle_degrees() const;
  double boundary_length() const;
  double max_edge() const;
};

/// Uniform-or-graded grid in s = log(r / R) on [0, log(rho_max / R)].
struct RadialLogMesh {
  double radius = 1.0;
  std::vector<double> s_nodes;
};

/// Geometric grading toward the listed endpoints (0 = a, 1 = b). Spacings shrink
/// by `grade_ratio` per cell approaching a listed endpoint; with both endpoints
/// listed the two halves mirror each other. `grade_ratio == 1` gives a uniform mesh.
Mesh1D build_interval_mesh(const Interval& domain, int n, double grade_ratio,
                           const std::vector<int>& toward);

/// Grading ratio for which the smallest cell of an n-cell graded mesh equals
/// `min_cell`, never more aggressive than `floor_ratio`.
double grade_ratio_for_min_cell(const Interval& domain, int n, int graded_sides, double min_cell,
                                double floor_ratio = 0.7);

/// Nested refinement toward the listed endpoints: the cell touching each listed
/// endpoint receives a scaled copy of the mesh (of the half mesh when both are
/// listed), so the cell count roughly doubles and the smallest cell is squared in
/// units of the interval length.
Mesh1D refine_toward(const Mesh1D& mesh, const std::vector<int>& toward);

/// Uniform bisection of every cell.
Mesh1D bisect(const Mesh1D& mesh);

/// Boundary-conforming Delaunay triangulation of a structured point cloud with
/// target edge length h, refined to h/4 within `grade_depth` of `grade_near`.
TriMesh build_polygon_mesh(const ConvexPolygon& domain, double h, const std::vector<int>& grade_near,
                           double grade_depth);

/// Red refinement: every triangle split into four (nested).
TriMesh refine_uniform(const TriMesh& mesh);
/// As above; `parents[i]` lists the coarse vertices whose average is fine vertex i.
TriMesh refine_uniform(const TriMesh& mesh, std::vector<std::array<int, 2>>& parents);

RadialLogMesh build_radial_mesh(const ExteriorBall& domain, int n);
Mesh1D build_radial_mesh(const Ball& domain, int n);

}  // namespace hardy
