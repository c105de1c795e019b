#include "morphkit/geometry/delaunay.hpp"

#include <algorithm>
#include <cmath>

#include "morphkit/common/error.hpp"

namespace morphkit::geom {

std::array<Vec2, 8> unit_square_boundary() {
    return {{{0.0, 0.0}, {0.5, 0.0}, {1.0, 0.0}, {1.0, 0.5},
             {1.0, 1.0}, {0.5, 1.0}, {0.0, 1.0}, {0.0, 0.5}}};
}

double triangle_area(Vec2 a, Vec2 b, Vec2 c) {
    return 0.5 * ((b.x - a.x) * (c.y - a.y) - (c.x - a.x) * (b.y - a.y));
}

bool in_circumcircle(Vec2 a, Vec2 b, Vec2 c, Vec2 p, double tol) {
    // orient CCW so the determinant sign is meaningful
    if (triangle_area(a, b, c) < 0.0) std::swap(b, c);
    const double ax = a.x - p.x, ay = a.y - p.y;
    const double bx = b.x - p.x, by = b.y - p.y;
    const double cx = c.x - p.x, cy = c.y - p.y;
    const double det = (ax * ax + ay * ay) * (bx * cy - cx * by) -
                       (bx * bx + by * by) * (ax * cy - cx * ay) +
                       (cx * cx + cy * cy) * (ax * by - bx * ay);
    return det > tol;
}

namespace {

struct Edge {
    int a, b;
    bool operator==(const Edge& o) const {
        return (a == o.a && b == o.b) || (a == o.b && b == o.a);
    }
};

}  // namespace

TriangleMesh delaunay_triangulate(const std::vector<Vec2>& points) {
    const int n = static_cast<int>(points.size());
    if (n < 3) throw DimensionError("delaunay_triangulate: need at least 3 points");

    // super-triangle comfortably containing all points
    double min_x = points[0].x, max_x = points[0].x;
    double min_y = points[0].y, max_y = points[0].y;
    for (const Vec2& p : points) {
        min_x = std::min(min_x, p.x);
        max_x = std::max(max_x, p.x);
        min_y = std::min(min_y, p.y);
        max_y = std::max(max_y, p.y);
    }
    const double span = std::max({max_x - min_x, max_y - min_y, 1.0});
    const double cx = 0.5 * (min_x + max_x);
    const double cy = 0.5 * (min_y + max_y);

    std::vector<Vec2> verts(points);
    verts.push_back({cx - 30.0 * span, cy - 10.0 * span});
    verts.push_back({cx + 30.0 * span, cy - 10.0 * span});
    verts.push_back({cx, cy + 30.0 * span});
    const int s0 = n, s1 = n + 1, s2 = n + 2;

    std::vector<Triangle> tris{{s0, s1, s2}};

    for (int ip = 0; ip < n; ++ip) {
        const Vec2 p = verts[static_cast<std::size_t>(ip)];

        std::vector<Triangle> keep;
        std::vector<Edge> boundary;
        keep.reserve(tris.size() + 2);
        for (const Triangle& t : tris) {
            const Vec2 a = verts[static_cast<std::size_t>(t.a)];
            const Vec2 b = verts[static_cast<std::size_t>(t.b)];
            const Vec2 c = verts[static_cast<std::size_t>(t.c)];
            if (in_circumcircle(a, b, c, p)) {
                // collect cavity edges; shared edges cancel out
                const Edge es[3] = {{t.a, t.b}, {t.b, t.c}, {t.c, t.a}};
                for (const Edge& e : es) {
                    auto it = std::find(boundary.begin(), boundary.end(), e);
                    if (it != boundary.end())
                        boundary.erase(it);
                    else
                        boundary.push_back(e);
                }
            } else {
                keep.push_back(t);
            }
        }
        if (boundary.empty()) continue;  // duplicate / degenerate point: skip

        tris = std::move(keep);
        for (const Edge& e : boundary) tris.push_back({e.a, e.b, ip});
    }

    TriangleMesh mesh;
    mesh.vertices = points;
    mesh.landmark_count = n;
    for (const Triangle& t : tris) {
        if (t.a >= n || t.b >= n || t.c >= n) continue;  // touches super-triangle
        Triangle out = t;
        // store CCW (positive area) for predictable barycentric math
        if (triangle_area(points[static_cast<std::size_t>(out.a)], points[static_cast<std::size_t>(out.b)],
                          points[static_cast<std::size_t>(out.c)]) < 0.0)
            std::swap(out.b, out.c);
        mesh.triangles.push_back(out);
    }
    if (mesh.triangles.empty())
        throw Error("delaunay_triangulate: degenerate input (all points collinear?)");
    return mesh;
}

TriangleMesh build_face_mesh(const LandmarkSet& landmarks) {
    std::vector<Vec2> pts = landmarks.points();
    for (const Vec2& b : unit_square_boundary()) pts.push_back(b);
    TriangleMesh mesh = delaunay_triangulate(pts);
    mesh.landmark_count = landmarks.count();
    return mesh;
}

}  // namespace morphkit::geom
