#include "morphkit/geometry/image.hpp"

#include <algorithm>
#include <cmath>

#include "morphkit/common/error.hpp"

namespace morphkit::geom {

FaceImage::FaceImage(int width, int height)
    : width_(width), height_(height),
      pix_(static_cast<std::size_t>(3) * width * height, 0.0) {
    if (width <= 0 || height <= 0) throw DimensionError("FaceImage: dims must be positive");
}

bool FaceImage::is_valid() const {
    for (double v : pix_)
        if (!std::isfinite(v) || v < 0.0 || v > 1.0) return false;
    return !pix_.empty();
}

void FaceImage::clamp01() {
    for (double& v : pix_) v = std::clamp(v, 0.0, 1.0);
}

nn::Tensor FaceImage::to_tensor() const {
    return nn::Tensor({3, height_, width_}, pix_);
}

FaceImage FaceImage::from_tensor(const nn::Tensor& t, bool clamp) {
    if (t.rank() != 3 || t.dim(0) != 3)
        throw DimensionError("FaceImage::from_tensor: expected [3,H,W]");
    FaceImage img(t.dim(2), t.dim(1));
    img.pix_ = t.vec();
    if (clamp) img.clamp01();
    return img;
}

double FaceImage::sample_bilinear(int c, double x, double y) const {
    const double cx = std::clamp(x, 0.0, static_cast<double>(width_ - 1));
    const double cy = std::clamp(y, 0.0, static_cast<double>(height_ - 1));
    const int x0 = static_cast<int>(std::floor(cx));
    const int y0 = static_cast<int>(std::floor(cy));
    const int x1 = std::min(x0 + 1, width_ - 1);
    const int y1 = std::min(y0 + 1, height_ - 1);
    const double fx = cx - x0;
    const double fy = cy - y0;
    const double top = (1.0 - fx) * at(c, y0, x0) + fx * at(c, y0, x1);
    const double bot = (1.0 - fx) * at(c, y1, x0) + fx * at(c, y1, x1);
    return (1.0 - fy) * top + fy * bot;
}

FaceImage alpha_blend(const FaceImage& a, const FaceImage& b, double alpha) {
    if (!a.same_dims(b)) throw DimensionError("alpha_blend: image dims differ");
    if (alpha < 0.0 || alpha > 1.0) throw DimensionError("alpha_blend: alpha outside [0,1]");
    FaceImage out(a.width(), a.height());
    const std::size_t n = a.data().size();
    for (std::size_t i = 0; i < n; ++i)
        out.data()[i] = std::clamp(alpha * a.data()[i] + (1.0 - alpha) * b.data()[i], 0.0, 1.0);
    return out;
}

double max_abs_diff(const FaceImage& a, const FaceImage& b) {
    if (!a.same_dims(b)) throw DimensionError("max_abs_diff: image dims differ");
    double m = 0.0;
    for (std::size_t i = 0; i < a.data().size(); ++i)
        m = std::max(m, std::fabs(a.data()[i] - b.data()[i]));
    return m;
}

}  // namespace morphkit::geom
