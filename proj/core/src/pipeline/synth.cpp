#include "morphkit/pipeline/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "morphkit/common/error.hpp"
#include "morphkit/common/rng.hpp"
#include "morphkit/io/png_io.hpp"

namespace morphkit::pipeline {

namespace fs = std::filesystem;
using geom::Vec2;

namespace {

constexpr double kPi = 3.14159265358979323846;

struct FaceParams {
    // geometry (normalized units; kept low-variance across identities)
    double cx, cy;          // face center
    double rx, ry;          // face half-axes
    double eye_dx, eye_y;   // pupil offsets from center
    double eye_rx, eye_ry;  // eye ring half-axes
    double iris_r;
    double brow_dy, brow_arch, brow_len;
    double nose_top, nose_tip, nose_w;
    double mouth_y, mouth_w, mouth_h;
    double rot;  // small in-plane rotation

    // appearance (high-variance across identities)
    double skin[3];
    double iris[3];
    double lip[3];
    double brow_dark;
    double bg;
    double noise_amp;
    std::uint64_t noise_seed;
};

FaceParams draw_params(std::uint64_t seed, int index) {
    Rng rng(seed * 0x9E3779B97F4A7C15ull + static_cast<std::uint64_t>(index) + 1);
    FaceParams p{};
    p.cx = 0.50 + rng.uniform(-0.015, 0.015);
    p.cy = 0.52 + rng.uniform(-0.015, 0.015);
    p.rx = 0.30 + rng.uniform(-0.012, 0.012);
    p.ry = 0.38 + rng.uniform(-0.015, 0.015);
    p.eye_dx = 0.125 + rng.uniform(-0.006, 0.006);
    p.eye_y = p.cy - 0.085 + rng.uniform(-0.006, 0.006);
    p.eye_rx = 0.050 + rng.uniform(-0.004, 0.004);
    p.eye_ry = 0.028 + rng.uniform(-0.003, 0.003);
    p.iris_r = 0.016 + rng.uniform(-0.002, 0.002);
    p.brow_dy = 0.055 + rng.uniform(-0.006, 0.006);
    p.brow_arch = 0.016 + rng.uniform(-0.004, 0.004);
    p.brow_len = 0.075 + rng.uniform(-0.006, 0.006);
    p.nose_top = p.eye_y + 0.030;
    p.nose_tip = p.cy + 0.075 + rng.uniform(-0.008, 0.008);
    p.nose_w = 0.040 + rng.uniform(-0.004, 0.004);
    p.mouth_y = p.cy + 0.175 + rng.uniform(-0.010, 0.010);
    p.mouth_w = 0.085 + rng.uniform(-0.008, 0.008);
    p.mouth_h = 0.030 + rng.uniform(-0.004, 0.004);
    p.rot = rng.uniform(-0.05, 0.05);

    p.skin[0] = rng.uniform(0.55, 0.85);
    p.skin[1] = p.skin[0] * rng.uniform(0.75, 0.92);
    p.skin[2] = p.skin[1] * rng.uniform(0.72, 0.95);
    p.iris[0] = rng.uniform(0.10, 0.55);
    p.iris[1] = rng.uniform(0.15, 0.55);
    p.iris[2] = rng.uniform(0.20, 0.65);
    p.lip[0] = rng.uniform(0.55, 0.80);
    p.lip[1] = rng.uniform(0.25, 0.40);
    p.lip[2] = rng.uniform(0.28, 0.45);
    p.brow_dark = rng.uniform(0.08, 0.30);
    p.bg = rng.uniform(0.12, 0.35);
    p.noise_amp = rng.uniform(0.015, 0.045);
    p.noise_seed = rng.raw();
    return p;
}

Vec2 rotate_about(Vec2 v, Vec2 c, double angle) {
    const double ca = std::cos(angle), sa = std::sin(angle);
    const double dx = v.x - c.x, dy = v.y - c.y;
    return {c.x + ca * dx - sa * dy, c.y + sa * dx + ca * dy};
}

std::vector<Vec2> template_landmarks(const FaceParams& p) {
    std::vector<Vec2> pts;
    pts.reserve(kSynthLandmarkCount);

    // 0-32 jaw: lower face-ellipse arc, left ear to right ear through the chin
    for (int i = 0; i < 33; ++i) {
        const double deg = 170.0 - 160.0 * i / 32.0;
        const double a = deg * kPi / 180.0;
        pts.push_back({p.cx + p.rx * std::cos(a), p.cy + p.ry * std::sin(a)});
    }
    // 33-42 / 43-52 eyebrows
    for (int side = 0; side < 2; ++side) {
        const double ex = side == 0 ? p.cx - p.eye_dx : p.cx + p.eye_dx;
        const double by = p.eye_y - p.brow_dy;
        for (int i = 0; i < 10; ++i) {
            const double t = i / 9.0;
            pts.push_back({ex - p.brow_len + 2.0 * p.brow_len * t,
                           by - p.brow_arch * std::sin(kPi * t)});
        }
    }
    // 53-60 / 61-68 eye rings
    for (int side = 0; side < 2; ++side) {
        const double ex = side == 0 ? p.cx - p.eye_dx : p.cx + p.eye_dx;
        for (int i = 0; i < 8; ++i) {
            const double a = 2.0 * kPi * i / 8.0;
            pts.push_back({ex + p.eye_rx * std::cos(a), p.eye_y + p.eye_ry * std::sin(a)});
        }
    }
    // 69-80 nose: 4 bridge points then an 8-point base arc
    for (int i = 0; i < 4; ++i) {
        const double t = i / 4.0;
        pts.push_back({p.cx, p.nose_top + t * (p.nose_tip - p.nose_top)});
    }
    for (int i = 0; i < 8; ++i) {
        const double deg = 15.0 + 150.0 * i / 7.0;
        const double a = deg * kPi / 180.0;
        pts.push_back({p.cx + p.nose_w * std::cos(a), p.nose_tip + 0.55 * p.nose_w * std::sin(a)});
    }
    // 81-92 mouth outer ellipse, 93-100 mouth inner ellipse
    for (int i = 0; i < 12; ++i) {
        const double a = 2.0 * kPi * i / 12.0;
        pts.push_back({p.cx + p.mouth_w * std::cos(a), p.mouth_y + p.mouth_h * std::sin(a)});
    }
    for (int i = 0; i < 8; ++i) {
        const double a = 2.0 * kPi * i / 8.0 + kPi / 8.0;
        pts.push_back({p.cx + 0.66 * p.mouth_w * std::cos(a),
                       p.mouth_y + 0.38 * p.mouth_h * std::sin(a)});
    }
    // 101-105 pupils, nose tip, lip centers
    pts.push_back({p.cx - p.eye_dx, p.eye_y});
    pts.push_back({p.cx + p.eye_dx, p.eye_y});
    pts.push_back({p.cx, p.nose_tip});
    pts.push_back({p.cx, p.mouth_y - 0.5 * p.mouth_h});
    pts.push_back({p.cx, p.mouth_y + 0.5 * p.mouth_h});

    for (Vec2& v : pts) v = rotate_about(v, {p.cx, p.cy}, p.rot);
    return pts;
}

// smooth seeded value noise on a coarse grid
class ValueNoise {
public:
    ValueNoise(std::uint64_t seed, int grid) : grid_(grid), cells_((grid + 1) * (grid + 1)) {
        Rng rng(seed);
        for (double& c : cells_) c = rng.uniform();
    }

    double at(double u, double v) const {
        const double gu = std::clamp(u, 0.0, 1.0) * grid_;
        const double gv = std::clamp(v, 0.0, 1.0) * grid_;
        const int iu = std::min(static_cast<int>(gu), grid_ - 1);
        const int iv = std::min(static_cast<int>(gv), grid_ - 1);
        const double fu = gu - iu, fv = gv - iv;
        auto cell = [&](int x, int y) { return cells_[static_cast<std::size_t>(y) * (grid_ + 1) + x]; };
        const double top = (1 - fu) * cell(iu, iv) + fu * cell(iu + 1, iv);
        const double bot = (1 - fu) * cell(iu, iv + 1) + fu * cell(iu + 1, iv + 1);
        return (1 - fv) * top + fv * bot;
    }

private:
    int grid_;
    std::vector<double> cells_;
};

double ellipse_q(double u, double v, double cx, double cy, double rx, double ry) {
    const double dx = (u - cx) / rx, dy = (v - cy) / ry;
    return dx * dx + dy * dy;
}

// 0 outside, 1 inside, smooth ramp near the rim
double ellipse_mask(double q, double softness) {
    return std::clamp((1.0 - q) / softness + 0.5, 0.0, 1.0);
}

}  // namespace

SyntheticFace make_synthetic_face(std::uint64_t seed, int index, int resolution) {
    if (resolution < 16) throw ConfigError("make_synthetic_face: resolution too small");
    const FaceParams p = draw_params(seed, index);
    const ValueNoise noise(p.noise_seed, 8);
    const ValueNoise fine(p.noise_seed ^ 0xF00Dull, 24);

    geom::FaceImage img(resolution, resolution);
    const double soft = 3.0 / resolution;  // edge smoothing in ellipse-q units

    for (int y = 0; y < resolution; ++y) {
        for (int x = 0; x < resolution; ++x) {
            const double px = (x + 0.5) / resolution;
            const double py = (y + 0.5) / resolution;
            // face-local coordinates (undo the head rotation)
            const Vec2 local = rotate_about({px, py}, {p.cx, p.cy}, -p.rot);
            const double u = local.x, v = local.y;

            // background with a soft vertical gradient
            double r = p.bg + 0.15 * py, g = p.bg + 0.12 * py, b = p.bg + 0.18 * py;

            const double face_q = ellipse_q(u, v, p.cx, p.cy, p.rx, p.ry);
            const double face_m = ellipse_mask(face_q, soft * 4.0);
            if (face_m > 0.0) {
                const double shade = 1.0 - 0.25 * face_q;  // brighter toward the center
                const double tex = 1.0 + p.noise_amp * (2.0 * noise.at(u, v) - 1.0) +
                                   0.5 * p.noise_amp * (2.0 * fine.at(u, v) - 1.0);
                double fr = p.skin[0] * shade * tex;
                double fg = p.skin[1] * shade * tex;
                double fb = p.skin[2] * shade * tex;

                for (int side = 0; side < 2; ++side) {
                    const double ex = side == 0 ? p.cx - p.eye_dx : p.cx + p.eye_dx;
                    const double eye_m = ellipse_mask(ellipse_q(u, v, ex, p.eye_y, p.eye_rx, p.eye_ry), soft * 2.0);
                    if (eye_m > 0.0) {
                        double er = 0.92, eg = 0.92, eb = 0.90;  // sclera
                        const double iris_m = ellipse_mask(ellipse_q(u, v, ex, p.eye_y, p.iris_r, p.iris_r), soft * 2.0);
                        if (iris_m > 0.0) {
                            er = er * (1 - iris_m) + p.iris[0] * iris_m;
                            eg = eg * (1 - iris_m) + p.iris[1] * iris_m;
                            eb = eb * (1 - iris_m) + p.iris[2] * iris_m;
                            const double pup_m = ellipse_mask(
                                ellipse_q(u, v, ex, p.eye_y, p.iris_r * 0.45, p.iris_r * 0.45), soft * 2.0);
                            er *= (1 - 0.9 * pup_m);
                            eg *= (1 - 0.9 * pup_m);
                            eb *= (1 - 0.9 * pup_m);
                        }
                        fr = fr * (1 - eye_m) + er * eye_m;
                        fg = fg * (1 - eye_m) + eg * eye_m;
                        fb = fb * (1 - eye_m) + eb * eye_m;
                    }
                    // eyebrow band
                    const double bx = ex;
                    const double by = p.eye_y - p.brow_dy - p.brow_arch * 0.5;
                    const double brow_m = ellipse_mask(ellipse_q(u, v, bx, by, p.brow_len, 0.011), soft * 2.0);
                    if (brow_m > 0.0) {
                        fr = fr * (1 - brow_m) + p.brow_dark * brow_m;
                        fg = fg * (1 - brow_m) + p.brow_dark * brow_m;
                        fb = fb * (1 - brow_m) + p.brow_dark * 0.9 * brow_m;
                    }
                }

                // nose: darker ridge plus nostril dots
                const double ridge = ellipse_mask(
                    ellipse_q(u, v, p.cx, 0.5 * (p.nose_top + p.nose_tip), 0.012,
                              0.5 * (p.nose_tip - p.nose_top) + 0.01), soft * 2.0);
                fr *= 1.0 - 0.12 * ridge;
                fg *= 1.0 - 0.14 * ridge;
                fb *= 1.0 - 0.14 * ridge;
                for (int side = 0; side < 2; ++side) {
                    const double nx = p.cx + (side == 0 ? -0.55 : 0.55) * p.nose_w;
                    const double nost = ellipse_mask(ellipse_q(u, v, nx, p.nose_tip + 0.012, 0.009, 0.007), soft * 2.0);
                    fr *= 1.0 - 0.5 * nost;
                    fg *= 1.0 - 0.5 * nost;
                    fb *= 1.0 - 0.5 * nost;
                }

                // mouth: outer lips plus darker inner band
                const double lip_m = ellipse_mask(ellipse_q(u, v, p.cx, p.mouth_y, p.mouth_w, p.mouth_h), soft * 2.0);
                if (lip_m > 0.0) {
                    fr = fr * (1 - lip_m) + p.lip[0] * lip_m;
                    fg = fg * (1 - lip_m) + p.lip[1] * lip_m;
                    fb = fb * (1 - lip_m) + p.lip[2] * lip_m;
                    const double inner =
                        ellipse_mask(ellipse_q(u, v, p.cx, p.mouth_y, 0.66 * p.mouth_w, 0.30 * p.mouth_h), soft * 2.0);
                    fr *= 1.0 - 0.45 * inner;
                    fg *= 1.0 - 0.45 * inner;
                    fb *= 1.0 - 0.45 * inner;
                }

                r = r * (1 - face_m) + fr * face_m;
                g = g * (1 - face_m) + fg * face_m;
                b = b * (1 - face_m) + fb * face_m;
            }

            img.at(0, y, x) = std::clamp(r, 0.0, 1.0);
            img.at(1, y, x) = std::clamp(g, 0.0, 1.0);
            img.at(2, y, x) = std::clamp(b, 0.0, 1.0);
        }
    }

    std::vector<Vec2> pts = template_landmarks(p);
    // keep every landmark strictly inside the image bounds
    for (Vec2& v : pts) {
        v.x = std::clamp(v.x, 0.01, 0.99);
        v.y = std::clamp(v.y, 0.01, 0.99);
    }
    return {std::move(img), geom::LandmarkSet(std::move(pts))};
}

std::vector<std::string> generate_synthetic_dataset(std::uint64_t seed, int count, int resolution,
                                                    const std::string& out_dir) {
    if (count < 1) throw ConfigError("generate_synthetic_dataset: count must be >= 1");
    fs::create_directories(out_dir);
    std::vector<std::string> written;

    for (int i = 0; i < count; ++i) {
        const SyntheticFace face = make_synthetic_face(seed, i, resolution);
        char name[32];
        std::snprintf(name, sizeof(name), "subj%03d", i);
        const std::string img_path = out_dir + "/" + name + ".png";
        const std::string lmk_path = out_dir + "/" + name + ".lmk";
        io::save_png(face.image, img_path);
        geom::save_landmarks(face.landmarks, lmk_path, resolution, resolution);
        written.push_back(img_path);
        written.push_back(lmk_path);
    }

    const std::string pairs_path = out_dir + "/pairs.csv";
    std::ofstream pairs(pairs_path);
    if (!pairs) throw IoError("generate_synthetic_dataset: cannot write " + pairs_path);
    pairs << "pair_id,img_a,img_b,lmk_a,lmk_b\n";
    for (int i = 0; i + 1 < count; i += 2) {
        char a[32], b[32];
        std::snprintf(a, sizeof(a), "subj%03d", i);
        std::snprintf(b, sizeof(b), "subj%03d", i + 1);
        pairs << "pair" << (i / 2 < 10 ? "0" : "") << i / 2 << "," << out_dir << "/" << a << ".png,"
              << out_dir << "/" << b << ".png," << out_dir << "/" << a << ".lmk," << out_dir << "/"
              << b << ".lmk\n";
    }
    pairs.close();
    written.push_back(pairs_path);
    return written;
}

}  // namespace morphkit::pipeline
