#include "morphkit/gib/heatmap.hpp"

#include <algorithm>
#include <cmath>

#include "morphkit/common/error.hpp"

namespace morphkit::gib {

nn::Tensor render_heatmaps(const geom::LandmarkSet& landmarks, int resolution, double sigma) {
    if (sigma <= 0.0) throw ConfigError("render_heatmaps: sigma must be positive");
    if (resolution <= 0) throw ConfigError("render_heatmaps: resolution must be positive");

    const int k = landmarks.count();
    nn::Tensor out({k, resolution, resolution});
    const double inv = 1.0 / (2.0 * sigma * sigma);
    for (int ch = 0; ch < k; ++ch) {
        const geom::Vec2 p = landmarks.point(ch);
        const double cx = std::clamp(std::round(p.x * resolution), 0.0, resolution - 1.0);
        const double cy = std::clamp(std::round(p.y * resolution), 0.0, resolution - 1.0);
        for (int y = 0; y < resolution; ++y) {
            const double dy = y - cy;
            for (int x = 0; x < resolution; ++x) {
                const double dx = x - cx;
                out.at(ch, y, x) = std::exp(-(dx * dx + dy * dy) * inv);
            }
        }
    }
    return out;
}

}  // namespace morphkit::gib
