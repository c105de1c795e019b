#include "morphkit/eval/quality.hpp"

#include <algorithm>
#include <cmath>

#include "morphkit/common/error.hpp"

namespace morphkit::eval {

namespace {

constexpr double kMsSsimWeights5[5] = {0.0448, 0.2856, 0.3001, 0.2363, 0.1333};
constexpr double kPowClamp = 1e-6;

// one channel as a plain H x W grid
struct Plane {
    int w = 0, h = 0;
    std::vector<double> v;
    double at(int y, int x) const { return v[static_cast<std::size_t>(y) * w + x]; }
    double& at(int y, int x) { return v[static_cast<std::size_t>(y) * w + x]; }
};

Plane channel_plane(const geom::FaceImage& img, int c) {
    Plane p;
    p.w = img.width();
    p.h = img.height();
    p.v.resize(static_cast<std::size_t>(p.w) * p.h);
    for (int y = 0; y < p.h; ++y)
        for (int x = 0; x < p.w; ++x) p.at(y, x) = img.at(c, y, x);
    return p;
}

Plane filter_valid(const Plane& in, const std::vector<double>& k) {
    const int ks = static_cast<int>(k.size());
    Plane tmp;  // horizontal pass
    tmp.w = in.w - ks + 1;
    tmp.h = in.h;
    tmp.v.resize(static_cast<std::size_t>(tmp.w) * tmp.h);
    for (int y = 0; y < tmp.h; ++y)
        for (int x = 0; x < tmp.w; ++x) {
            double acc = 0.0;
            for (int i = 0; i < ks; ++i) acc += k[static_cast<std::size_t>(i)] * in.at(y, x + i);
            tmp.at(y, x) = acc;
        }
    Plane out;  // vertical pass
    out.w = tmp.w;
    out.h = in.h - ks + 1;
    out.v.resize(static_cast<std::size_t>(out.w) * out.h);
    for (int y = 0; y < out.h; ++y)
        for (int x = 0; x < out.w; ++x) {
            double acc = 0.0;
            for (int i = 0; i < ks; ++i) acc += k[static_cast<std::size_t>(i)] * tmp.at(y + i, x);
            out.at(y, x) = acc;
        }
    return out;
}

Plane mul_planes(const Plane& a, const Plane& b) {
    Plane out = a;
    for (std::size_t i = 0; i < out.v.size(); ++i) out.v[i] *= b.v[i];
    return out;
}

Plane downsample2(const Plane& in) {
    Plane out;
    out.w = in.w / 2;
    out.h = in.h / 2;
    out.v.resize(static_cast<std::size_t>(out.w) * out.h);
    for (int y = 0; y < out.h; ++y)
        for (int x = 0; x < out.w; ++x)
            out.at(y, x) = 0.25 * (in.at(2 * y, 2 * x) + in.at(2 * y, 2 * x + 1) +
                                   in.at(2 * y + 1, 2 * x) + in.at(2 * y + 1, 2 * x + 1));
    return out;
}

// mean contrast-structure term and mean full-SSIM term over the valid region
struct SsimTerms {
    double cs = 0.0;
    double ssim_full = 0.0;  // mean of the per-pixel luminance*cs map
};

SsimTerms ssim_terms(const Plane& x, const Plane& y, const std::vector<double>& window) {
    const Plane mu_x = filter_valid(x, window);
    const Plane mu_y = filter_valid(y, window);
    const Plane xx = filter_valid(mul_planes(x, x), window);
    const Plane yy = filter_valid(mul_planes(y, y), window);
    const Plane xy = filter_valid(mul_planes(x, y), window);

    double cs = 0.0, full = 0.0;
    const std::size_t n = mu_x.v.size();
    for (std::size_t i = 0; i < n; ++i) {
        const double mx = mu_x.v[i], my = mu_y.v[i];
        const double sx = xx.v[i] - mx * mx;
        const double sy = yy.v[i] - my * my;
        const double sxy = xy.v[i] - mx * my;
        const double lum_i = (2.0 * mx * my + kSsimC1) / (mx * mx + my * my + kSsimC1);
        const double cs_i = (2.0 * sxy + kSsimC2) / (sx + sy + kSsimC2);
        cs += cs_i;
        full += lum_i * cs_i;
    }
    return {cs / static_cast<double>(n), full / static_cast<double>(n)};
}

void check_pair(const geom::FaceImage& a, const geom::FaceImage& b, const char* op) {
    if (!a.same_dims(b)) throw DimensionError(std::string(op) + ": image dims differ");
}

}  // namespace

std::vector<double> gaussian_window(int size, double sigma) {
    std::vector<double> k(static_cast<std::size_t>(size));
    const double c = (size - 1) / 2.0;
    double sum = 0.0;
    for (int i = 0; i < size; ++i) {
        k[static_cast<std::size_t>(i)] = std::exp(-(i - c) * (i - c) / (2.0 * sigma * sigma));
        sum += k[static_cast<std::size_t>(i)];
    }
    for (double& v : k) v /= sum;
    return k;
}

int ms_ssim_scale_count(int width, int height) {
    int scales = 0;
    int m = std::min(width, height);
    while (m >= kSsimWindow && scales < 5) {
        ++scales;
        m /= 2;
    }
    if (scales == 0)
        throw DimensionError("ms_ssim: image smaller than the SSIM window");
    return scales;
}

std::vector<double> ms_ssim_weights(int scales) {
    std::vector<double> w(kMsSsimWeights5, kMsSsimWeights5 + scales);
    double sum = 0.0;
    for (double v : w) sum += v;
    for (double& v : w) v /= sum;
    return w;
}

double psnr(const geom::FaceImage& img, const geom::FaceImage& ref) {
    check_pair(img, ref, "psnr");
    double mse = 0.0;
    for (std::size_t i = 0; i < img.data().size(); ++i) {
        const double d = img.data()[i] - ref.data()[i];
        mse += d * d;
    }
    mse /= static_cast<double>(img.data().size());
    if (mse <= 0.0) return kPsnrCap;
    return std::min(kPsnrCap, 10.0 * std::log10(1.0 / mse));
}

double ssim(const geom::FaceImage& img, const geom::FaceImage& ref) {
    check_pair(img, ref, "ssim");
    const std::vector<double> window = gaussian_window(kSsimWindow, kSsimSigma);
    double acc = 0.0;
    for (int c = 0; c < 3; ++c) {
        const Plane x = channel_plane(img, c);
        const Plane y = channel_plane(ref, c);
        if (x.w < kSsimWindow || x.h < kSsimWindow)
            throw DimensionError("ssim: image smaller than the SSIM window");
        const Plane mu_x = filter_valid(x, window);
        const Plane mu_y = filter_valid(y, window);
        const Plane xx = filter_valid(mul_planes(x, x), window);
        const Plane yy = filter_valid(mul_planes(y, y), window);
        const Plane xy = filter_valid(mul_planes(x, y), window);
        double mean = 0.0;
        for (std::size_t i = 0; i < mu_x.v.size(); ++i) {
            const double mx = mu_x.v[i], my = mu_y.v[i];
            const double sx = xx.v[i] - mx * mx;
            const double sy = yy.v[i] - my * my;
            const double sxy = xy.v[i] - mx * my;
            mean += ((2.0 * mx * my + kSsimC1) * (2.0 * sxy + kSsimC2)) /
                    ((mx * mx + my * my + kSsimC1) * (sx + sy + kSsimC2));
        }
        acc += mean / static_cast<double>(mu_x.v.size());
    }
    return acc / 3.0;
}

double ms_ssim(const geom::FaceImage& img, const geom::FaceImage& ref) {
    check_pair(img, ref, "ms_ssim");
    const int scales = ms_ssim_scale_count(img.width(), img.height());
    const std::vector<double> weights = ms_ssim_weights(scales);
    const std::vector<double> window = gaussian_window(kSsimWindow, kSsimSigma);

    // per-scale terms are means over all three channels jointly, which keeps
    // this metric identical in structure to the differentiable training loss
    std::vector<Plane> x(3), y(3);
    for (int c = 0; c < 3; ++c) {
        x[static_cast<std::size_t>(c)] = channel_plane(img, c);
        y[static_cast<std::size_t>(c)] = channel_plane(ref, c);
    }
    double value = 1.0;
    for (int s = 0; s < scales; ++s) {
        double cs = 0.0, full = 0.0;
        for (int c = 0; c < 3; ++c) {
            const SsimTerms terms =
                ssim_terms(x[static_cast<std::size_t>(c)], y[static_cast<std::size_t>(c)], window);
            cs += terms.cs;
            full += terms.ssim_full;
        }
        cs /= 3.0;
        full /= 3.0;
        if (s + 1 < scales) {
            value *= std::pow(std::max(cs, kPowClamp), weights[static_cast<std::size_t>(s)]);
            for (int c = 0; c < 3; ++c) {
                x[static_cast<std::size_t>(c)] = downsample2(x[static_cast<std::size_t>(c)]);
                y[static_cast<std::size_t>(c)] = downsample2(y[static_cast<std::size_t>(c)]);
            }
        } else {
            value *= std::pow(std::max(full, kPowClamp), weights[static_cast<std::size_t>(s)]);
        }
    }
    return value;
}

QualityEntry morph_quality(const geom::FaceImage& morph, const geom::FaceImage& parent1,
                           const geom::FaceImage& parent2, const std::string& morph_id) {
    QualityEntry e;
    e.morph_id = morph_id;
    e.psnr_avg = 0.5 * (psnr(morph, parent1) + psnr(morph, parent2));
    e.ssim_avg = 0.5 * (ssim(morph, parent1) + ssim(morph, parent2));
    return e;
}

QualityReport summarize_quality(std::vector<QualityEntry> entries, int resolution) {
    if (entries.empty()) throw DimensionError("summarize_quality: no entries");
    QualityReport r;
    const double n = static_cast<double>(entries.size());
    for (const auto& e : entries) {
        r.psnr_mean += e.psnr_avg;
        r.ssim_mean += e.ssim_avg;
    }
    r.psnr_mean /= n;
    r.ssim_mean /= n;
    if (entries.size() > 1) {
        double vp = 0.0, vs = 0.0;
        for (const auto& e : entries) {
            vp += (e.psnr_avg - r.psnr_mean) * (e.psnr_avg - r.psnr_mean);
            vs += (e.ssim_avg - r.ssim_mean) * (e.ssim_avg - r.ssim_mean);
        }
        vp /= (n - 1.0);
        vs /= (n - 1.0);
        r.psnr_ci95 = 1.96 * std::sqrt(vp / n);
        r.ssim_ci95 = 1.96 * std::sqrt(vs / n);
    }
    r.ms_ssim_scales = ms_ssim_scale_count(resolution, resolution);
    r.entries = std::move(entries);
    return r;
}

}  // namespace morphkit::eval
