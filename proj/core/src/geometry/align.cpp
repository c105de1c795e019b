#include "morphkit/geometry/align.hpp"

#include <cmath>

#include "morphkit/common/error.hpp"

namespace morphkit::geom {

namespace {

Vec2 anchor_mean(const LandmarkSet& lms, const std::vector<int>& indices, const char* which) {
    if (indices.empty()) throw ConfigError(std::string("align_face: no indices for ") + which);
    Vec2 acc{0.0, 0.0};
    for (int i : indices) {
        if (i < 0 || i >= lms.count())
            throw ConfigError(std::string("align_face: anchor index out of range for ") + which);
        acc = acc + lms.point(i);
    }
    return (1.0 / static_cast<double>(indices.size())) * acc;
}

struct Similarity {
    // p' = (a p.x - b p.y + tx, b p.x + a p.y + ty)
    double a = 1.0, b = 0.0, tx = 0.0, ty = 0.0;

    Vec2 apply(Vec2 p) const { return {a * p.x - b * p.y + tx, b * p.x + a * p.y + ty}; }

    Similarity inverse() const {
        const double s2 = a * a + b * b;
        Similarity inv;
        inv.a = a / s2;
        inv.b = -b / s2;
        inv.tx = (-a * tx - b * ty) / s2;
        inv.ty = (b * tx - a * ty) / s2;
        return inv;
    }
};

// Least-squares similarity (rotation + uniform scale + translation) taking
// src points onto dst points; the complex-regression closed form.
Similarity solve_similarity(const std::vector<Vec2>& src, const std::vector<Vec2>& dst) {
    const double n = static_cast<double>(src.size());
    Vec2 ms{0, 0}, md{0, 0};
    for (std::size_t i = 0; i < src.size(); ++i) {
        ms = ms + src[i];
        md = md + dst[i];
    }
    ms = (1.0 / n) * ms;
    md = (1.0 / n) * md;

    double num_re = 0.0, num_im = 0.0, den = 0.0;
    for (std::size_t i = 0; i < src.size(); ++i) {
        const Vec2 zs = src[i] - ms;
        const Vec2 zd = dst[i] - md;
        num_re += zd.x * zs.x + zd.y * zs.y;
        num_im += zd.y * zs.x - zd.x * zs.y;
        den += zs.x * zs.x + zs.y * zs.y;
    }
    if (den < 1e-18) throw Error("align_face: degenerate anchors (coincident points)");

    Similarity t;
    t.a = num_re / den;
    t.b = num_im / den;
    if (t.a * t.a + t.b * t.b < 1e-18)
        throw Error("align_face: degenerate anchors (zero scale solution)");
    t.tx = md.x - (t.a * ms.x - t.b * ms.y);
    t.ty = md.y - (t.b * ms.x + t.a * ms.y);
    return t;
}

}  // namespace

std::pair<FaceImage, LandmarkSet> align_face(const FaceImage& image, const LandmarkSet& landmarks,
                                             const AlignmentConfig& cfg) {
    if (cfg.output_size < 16) throw ConfigError("align_face: output_size must be >= 16");

    const double w = image.width(), h = image.height();
    const double s = cfg.output_size;

    const Vec2 le = anchor_mean(landmarks, cfg.left_eye_indices, "left eye");
    const Vec2 re = anchor_mean(landmarks, cfg.right_eye_indices, "right eye");
    const Vec2 mo = anchor_mean(landmarks, cfg.mouth_indices, "mouth");
    const double eye_dist = std::hypot((re.x - le.x) * w, (re.y - le.y) * h);
    if (eye_dist < 1e-9) throw Error("align_face: degenerate anchors (coincident eyes)");

    const std::vector<Vec2> src_px{{le.x * w, le.y * h}, {re.x * w, re.y * h}, {mo.x * w, mo.y * h}};
    const std::vector<Vec2> dst_px{{kCanonicalLeftEye.x * s, kCanonicalLeftEye.y * s},
                                   {kCanonicalRightEye.x * s, kCanonicalRightEye.y * s},
                                   {kCanonicalMouth.x * s, kCanonicalMouth.y * s}};

    const Similarity fwd = solve_similarity(src_px, dst_px);
    const Similarity inv = fwd.inverse();

    FaceImage out(cfg.output_size, cfg.output_size);
    for (int y = 0; y < cfg.output_size; ++y) {
        for (int x = 0; x < cfg.output_size; ++x) {
            const Vec2 sp = inv.apply({static_cast<double>(x), static_cast<double>(y)});
            const bool inside = sp.x >= 0.0 && sp.x <= w - 1 && sp.y >= 0.0 && sp.y <= h - 1;
            if (!inside && cfg.padding == AlignmentConfig::Padding::Zero) continue;
            for (int c = 0; c < 3; ++c) out.at(c, y, x) = image.sample_bilinear(c, sp.x, sp.y);
        }
    }

    std::vector<Vec2> out_lms(static_cast<std::size_t>(landmarks.count()));
    for (int i = 0; i < landmarks.count(); ++i) {
        const Vec2 p = landmarks.point(i);
        const Vec2 q = fwd.apply({p.x * w, p.y * h});
        out_lms[static_cast<std::size_t>(i)] = {q.x / s, q.y / s};
    }
    return {std::move(out), LandmarkSet(std::move(out_lms))};
}

}  // namespace morphkit::geom
