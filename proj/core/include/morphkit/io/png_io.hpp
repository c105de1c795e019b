#pragma once

#include <string>

#include "morphkit/geometry/image.hpp"

namespace morphkit::io {

/// Loads an 8-bit PNG (gray, gray+alpha, RGB or RGBA) as an RGB FaceImage
/// with values v/255.
geom::FaceImage load_png(const std::string& path);

/// Writes an 8-bit RGB PNG; values are clamped to [0,1] and rounded to the
/// nearest of 256 levels. Output bytes are deterministic for identical input.
void save_png(const geom::FaceImage& img, const std::string& path);

}  // namespace morphkit::io
