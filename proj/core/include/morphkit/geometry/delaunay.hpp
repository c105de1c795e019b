#pragma once

#include <array>
#include <vector>

#include "morphkit/geometry/landmarks.hpp"

namespace morphkit::geom {

struct Triangle {
    int a = 0, b = 0, c = 0;
};

/// Triangulation over landmark vertices plus (optionally) the 8 synthetic
/// boundary points. Vertex order: the K landmarks first, then any boundary
/// points, so triangle indices < landmark_count refer to landmarks.
struct TriangleMesh {
    std::vector<Vec2> vertices;
    std::vector<Triangle> triangles;
    int landmark_count = 0;
};

/// 4 corners + 4 edge midpoints of the unit square, in fixed order.
std::array<Vec2, 8> unit_square_boundary();

/// Bowyer-Watson Delaunay triangulation of the given points. Deterministic:
/// points are inserted in index order and exactly-cocircular configurations
/// are resolved by that order (an on-circle vertex is treated as outside),
/// which is the documented lexicographic tie-break.
/// Throws if fewer than 3 points or all points are collinear.
TriangleMesh delaunay_triangulate(const std::vector<Vec2>& points);

/// Delaunay mesh of `landmarks` augmented with the 8 unit-square boundary
/// points, so warps cover the whole image.
TriangleMesh build_face_mesh(const LandmarkSet& landmarks);

double triangle_area(Vec2 a, Vec2 b, Vec2 c);

/// True when p lies strictly inside the circumcircle of (a,b,c), using the
/// standard incircle determinant with tolerance `tol`.
bool in_circumcircle(Vec2 a, Vec2 b, Vec2 c, Vec2 p, double tol = 1e-12);

}  // namespace morphkit::geom
