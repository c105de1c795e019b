#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "morphkit/geometry/image.hpp"

namespace morphkit::eval {

/// Face-matcher abstraction: anything that maps an image to a fixed-length
/// embedding. Similarity is cosine, so similarity(x,x) is the maximum (1.0)
/// and the function is symmetric.
class MatcherInterface {
public:
    virtual ~MatcherInterface() = default;

    virtual std::vector<double> embed(const geom::FaceImage& image) = 0;

    /// Embeds an image on disk. The default loads the file and calls
    /// embed(); process-level plugins override this to shell out instead.
    virtual std::vector<double> embed_path(const std::string& path);

    virtual std::string id() const = 0;
};

double cosine_similarity(const std::vector<double>& a, const std::vector<double>& b);

/// Deterministic desk-scale matcher: area-downsampled grayscale image
/// projected through a seeded random matrix, then L2-normalized.
std::unique_ptr<MatcherInterface> toy_matcher(std::uint64_t seed);

/// Process-level matcher plugin: runs `command <image-path>` and parses the
/// embedding as whitespace-separated reals from stdout. This is how external
/// FRSs are wired in without code changes.
std::unique_ptr<MatcherInterface> external_matcher(const std::string& command);

}  // namespace morphkit::eval
