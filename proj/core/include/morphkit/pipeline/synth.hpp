#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "morphkit/geometry/image.hpp"
#include "morphkit/geometry/landmarks.hpp"

namespace morphkit::pipeline {

inline constexpr int kSynthLandmarkCount = 106;

// 106-point template index ranges (canonical order for this toolkit):
//   0-32   jaw / face contour
//   33-42  left eyebrow          43-52  right eyebrow
//   53-60  left eye ring         61-68  right eye ring
//   69-80  nose (bridge + base arc)
//   81-100 mouth (12 outer + 8 inner)
//   101    left pupil   102 right pupil   103 nose tip
//   104    upper-lip center      105 lower-lip center
inline constexpr int kIdxLeftPupil = 101;
inline constexpr int kIdxRightPupil = 102;
inline constexpr int kIdxUpperLip = 104;
inline constexpr int kIdxLowerLip = 105;

struct SyntheticFace {
    geom::FaceImage image;
    geom::LandmarkSet landmarks;  // normalized
};

/// Deterministic procedural face for identity index `index` under `seed`.
/// Geometry varies mildly across identities; texture/coloring varies a lot.
SyntheticFace make_synthetic_face(std::uint64_t seed, int index, int resolution);

/// Writes `count` faces (subjNNN.png / subjNNN.lmk) plus a pairs.csv pairing
/// consecutive subjects. Returns the written file paths.
std::vector<std::string> generate_synthetic_dataset(std::uint64_t seed, int count, int resolution,
                                                    const std::string& out_dir);

}  // namespace morphkit::pipeline
