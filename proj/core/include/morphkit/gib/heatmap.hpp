#pragma once

#include "morphkit/geometry/landmarks.hpp"
#include "morphkit/nn/tensor.hpp"

namespace morphkit::gib {

/// K-channel Gaussian heatmap stack for a landmark set: channel k is a
/// peak-1 Gaussian of std `sigma` (pixels) centered on the pixel nearest to
/// point k, so the peak value is exactly 1 at that pixel.
nn::Tensor render_heatmaps(const geom::LandmarkSet& landmarks, int resolution, double sigma);

}  // namespace morphkit::gib
