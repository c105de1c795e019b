#pragma once

#include <utility>
#include <vector>

#include "morphkit/geometry/image.hpp"
#include "morphkit/geometry/landmarks.hpp"

namespace morphkit::geom {

/// Canonical anchor targets, as fractions of the output crop size.
inline constexpr Vec2 kCanonicalLeftEye{0.34, 0.42};
inline constexpr Vec2 kCanonicalRightEye{0.66, 0.42};
inline constexpr Vec2 kCanonicalMouth{0.50, 0.78};

struct AlignmentConfig {
    int output_size = 256;
    // each anchor is the mean of the listed landmark indices
    std::vector<int> left_eye_indices;
    std::vector<int> right_eye_indices;
    std::vector<int> mouth_indices;
    enum class Padding { Edge, Zero } padding = Padding::Edge;
};

/// Crops and aligns a face via the similarity transform that best maps the
/// three anchor points (left eye, right eye, mouth center) onto their
/// canonical positions. The same transform is applied to all landmarks,
/// which are returned renormalized to the crop.
std::pair<FaceImage, LandmarkSet> align_face(const FaceImage& image, const LandmarkSet& landmarks,
                                             const AlignmentConfig& cfg);

}  // namespace morphkit::geom
