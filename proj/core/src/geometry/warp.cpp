#include "morphkit/geometry/warp.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "morphkit/common/error.hpp"

namespace morphkit::geom {

namespace {

constexpr double kDegenerateArea = 1e-12;  // in normalized units^2

struct Affine {
    // maps (x,y) -> (m00 x + m01 y + m02, m10 x + m11 y + m12)
    double m00, m01, m02, m10, m11, m12;
};

// Affine taking dst triangle (d0,d1,d2) onto src triangle (s0,s1,s2),
// solved by Cramer's rule.
bool solve_affine(Vec2 d0, Vec2 d1, Vec2 d2, Vec2 s0, Vec2 s1, Vec2 s2, Affine& out) {
    const double det = (d1.x - d0.x) * (d2.y - d0.y) - (d2.x - d0.x) * (d1.y - d0.y);
    if (std::fabs(det) < 1e-30) return false;
    const double inv = 1.0 / det;
    out.m00 = ((s1.x - s0.x) * (d2.y - d0.y) - (s2.x - s0.x) * (d1.y - d0.y)) * inv;
    out.m01 = ((s2.x - s0.x) * (d1.x - d0.x) - (s1.x - s0.x) * (d2.x - d0.x)) * inv;
    out.m10 = ((s1.y - s0.y) * (d2.y - d0.y) - (s2.y - s0.y) * (d1.y - d0.y)) * inv;
    out.m11 = ((s2.y - s0.y) * (d1.x - d0.x) - (s1.y - s0.y) * (d2.x - d0.x)) * inv;
    out.m02 = s0.x - out.m00 * d0.x - out.m01 * d0.y;
    out.m12 = s0.y - out.m10 * d0.x - out.m11 * d0.y;
    return true;
}

}  // namespace

FaceImage piecewise_affine_warp(const FaceImage& image, const LandmarkSet& src,
                                const LandmarkSet& dst, const TriangleMesh& mesh) {
    if (src.count() != dst.count())
        throw DimensionError("piecewise_affine_warp: src/dst landmark count mismatch");
    if (mesh.landmark_count != dst.count())
        throw DimensionError("piecewise_affine_warp: mesh was not built on dst landmarks");

    const int w = image.width(), h = image.height();

    // vertex positions in pixel coordinates; boundary vertices are shared
    auto vertex_px = [&](const LandmarkSet& lms, int idx) -> Vec2 {
        const Vec2 p = idx < lms.count() ? lms.point(idx)
                                         : mesh.vertices[static_cast<std::size_t>(idx)];
        return {p.x * w, p.y * h};
    };

    FaceImage out(w, h);
    std::vector<unsigned char> claimed(static_cast<std::size_t>(w) * h, 0);

    for (const Triangle& t : mesh.triangles) {
        const Vec2 d0 = vertex_px(dst, t.a), d1 = vertex_px(dst, t.b), d2 = vertex_px(dst, t.c);
        const Vec2 s0 = vertex_px(src, t.a), s1 = vertex_px(src, t.b), s2 = vertex_px(src, t.c);

        const double area2 = (d1.x - d0.x) * (d2.y - d0.y) - (d2.x - d0.x) * (d1.y - d0.y);
        Affine aff{};
        if (std::fabs(area2) < kDegenerateArea * w * h || !solve_affine(d0, d1, d2, s0, s1, s2, aff)) {
            std::fprintf(stderr, "warp: skipping degenerate triangle (%d,%d,%d)\n", t.a, t.b, t.c);
            continue;
        }

        const int x_lo = std::max(0, static_cast<int>(std::floor(std::min({d0.x, d1.x, d2.x}))));
        const int x_hi = std::min(w - 1, static_cast<int>(std::ceil(std::max({d0.x, d1.x, d2.x}))));
        const int y_lo = std::max(0, static_cast<int>(std::floor(std::min({d0.y, d1.y, d2.y}))));
        const int y_hi = std::min(h - 1, static_cast<int>(std::ceil(std::max({d0.y, d1.y, d2.y}))));
        const double inv_area2 = 1.0 / area2;

        for (int y = y_lo; y <= y_hi; ++y) {
            for (int x = x_lo; x <= x_hi; ++x) {
                unsigned char& claim = claimed[static_cast<std::size_t>(y) * w + x];
                if (claim) continue;
                const double px = x, py = y;
                // barycentric inclusion with a small seam tolerance
                const double l0 = ((d1.x - px) * (d2.y - py) - (d2.x - px) * (d1.y - py)) * inv_area2;
                const double l1 = ((d2.x - px) * (d0.y - py) - (d0.x - px) * (d2.y - py)) * inv_area2;
                const double l2 = 1.0 - l0 - l1;
                if (l0 < -1e-9 || l1 < -1e-9 || l2 < -1e-9) continue;
                const double sx = aff.m00 * px + aff.m01 * py + aff.m02;
                const double sy = aff.m10 * px + aff.m11 * py + aff.m12;
                for (int c = 0; c < 3; ++c) out.at(c, y, x) = image.sample_bilinear(c, sx, sy);
                claim = 1;
            }
        }
    }

    // pixels outside every triangle keep the source value
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x)
            if (!claimed[static_cast<std::size_t>(y) * w + x])
                for (int c = 0; c < 3; ++c) out.at(c, y, x) = image.at(c, y, x);
    return out;
}

FaceImage classical_morph(const FaceImage& i1, const FaceImage& i2, const LandmarkSet& l1,
                          const LandmarkSet& l2, const LandmarkSet& l_target, double alpha) {
    if (l1.count() != l_target.count() || l2.count() != l_target.count())
        throw DimensionError("classical_morph: landmark count mismatch");
    if (!i1.same_dims(i2)) throw DimensionError("classical_morph: image dims differ");
    const TriangleMesh mesh = build_face_mesh(l_target);
    const FaceImage w1 = piecewise_affine_warp(i1, l1, l_target, mesh);
    const FaceImage w2 = piecewise_affine_warp(i2, l2, l_target, mesh);
    return alpha_blend(w1, w2, alpha);
}

}  // namespace morphkit::geom
