#pragma once

#include "morphkit/geometry/delaunay.hpp"
#include "morphkit/geometry/image.hpp"
#include "morphkit/geometry/landmarks.hpp"

namespace morphkit::geom {

/// Piecewise-affine warp. `mesh` must be built on `dst` (landmarks plus the
/// 8 boundary points); each output pixel inside a dst triangle is pulled
/// from `image` through the affine map taking that triangle onto the
/// corresponding src triangle, with bilinear sampling and edge clamping.
/// Pixels outside every triangle are copied from the source. Degenerate dst
/// triangles (|area| < eps) are skipped and their pixels source-filled.
FaceImage piecewise_affine_warp(const FaceImage& image, const LandmarkSet& src,
                                const LandmarkSet& dst, const TriangleMesh& mesh);

/// Warp both contributing images onto `l_target` and alpha-blend them.
/// With l_target = average_landmarks(l1, l2) and alpha = 0.5 this is the
/// traditional landmark-morph baseline.
FaceImage classical_morph(const FaceImage& i1, const FaceImage& i2, const LandmarkSet& l1,
                          const LandmarkSet& l2, const LandmarkSet& l_target, double alpha);

}  // namespace morphkit::geom
