#pragma once

#include <string>
#include <vector>

#include "morphkit/nn/tensor.hpp"

namespace morphkit::geom {

/// RGB face image with real values in [0,1], stored channel-planar
/// ([3][H][W]) so it converts to a feature tensor without reshuffling.
class FaceImage {
public:
    FaceImage() = default;
    FaceImage(int width, int height);

    int width() const { return width_; }
    int height() const { return height_; }

    double& at(int c, int y, int x) {
        return pix_[(static_cast<std::size_t>(c) * height_ + y) * width_ + x];
    }
    double at(int c, int y, int x) const {
        return pix_[(static_cast<std::size_t>(c) * height_ + y) * width_ + x];
    }

    std::vector<double>& data() { return pix_; }
    const std::vector<double>& data() const { return pix_; }

    bool same_dims(const FaceImage& o) const {
        return width_ == o.width_ && height_ == o.height_;
    }
    /// True when every value is finite and within [0,1].
    bool is_valid() const;
    void clamp01();

    nn::Tensor to_tensor() const;  // [3,H,W]
    static FaceImage from_tensor(const nn::Tensor& t, bool clamp = true);

    /// Bilinear sample in pixel coordinates with edge clamping.
    double sample_bilinear(int c, double x, double y) const;

private:
    int width_ = 0;
    int height_ = 0;
    std::vector<double> pix_;
};

/// Per-pixel alpha * a + (1 - alpha) * b, clamped to [0,1].
FaceImage alpha_blend(const FaceImage& a, const FaceImage& b, double alpha);

/// Largest absolute per-channel difference between two images.
double max_abs_diff(const FaceImage& a, const FaceImage& b);

}  // namespace morphkit::geom
