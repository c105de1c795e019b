#pragma once

#include <vector>

#include "morphkit/geometry/image.hpp"
#include "morphkit/gib/generator.hpp"
#include "morphkit/nn/ops.hpp"

namespace morphkit::gib {

/// Seed of the frozen feature extractor backing the perceptual loss. The
/// weights are regenerated from this constant, so the extractor is identical
/// across runs and machines without shipping a weight blob.
inline constexpr std::uint64_t kPerceptualSeed = 0x5EEDFACEull;

/// Frozen randomly-initialized conv stack (tanh activations, three stride-2
/// stages). Pluggable: anything exposing features() can stand in for it.
class PerceptualNet {
public:
    explicit PerceptualNet(std::uint64_t seed = kPerceptualSeed);

    /// Activation maps of the three stages.
    std::vector<nn::Var> features(const nn::Var& image) const;

    /// Mean squared distance between activations, averaged over stages.
    nn::Var loss(const nn::Var& a, const nn::Var& b) const;

private:
    std::vector<nn::Tensor> weights_;
    std::vector<nn::Tensor> biases_;
};

/// Differentiable MS-SSIM value (same scale/weight/window conventions as
/// eval::ms_ssim; terms are joint means over the three channels).
nn::Var ms_ssim_graph(const nn::Var& a, const nn::Var& b);

struct ImageLossParts {
    double perceptual = 0.0;
    double l1 = 0.0;
    double msssim = 0.0;  // 1 - MS-SSIM
    double adv = 0.0;
    double total = 0.0;
};

/// Weighted sum of the four image-blend components; all must be finite.
double total_image_blend_loss(double perceptual, double l1, double msssim, double adv,
                              const BlendGeneratorConfig& cfg);

struct ImageLossGraph {
    nn::Var total;
    nn::Var perceptual;
    nn::Var l1;
    nn::Var msssim;
    nn::Var adv;  // null when no discriminator outputs were supplied

    ImageLossParts values() const;
};

/// Builds the full generator-side loss graph. `disc_fake_outputs` holds the
/// patch probability maps the active discriminators produced for the
/// generated image; the adversarial term is the non-saturating -mean log D,
/// averaged across discriminators.
ImageLossGraph image_blend_loss_graph(const nn::Var& generated, const nn::Var& supervisor,
                                      const std::vector<nn::Var>& disc_fake_outputs,
                                      const BlendGeneratorConfig& cfg,
                                      const PerceptualNet& perceptual);

/// Value-level convenience wrapper over image_blend_loss_graph.
ImageLossParts image_blend_loss(const geom::FaceImage& generated,
                                const geom::FaceImage& supervisor,
                                const std::vector<nn::Tensor>& disc_fake_outputs,
                                const BlendGeneratorConfig& cfg,
                                const PerceptualNet& perceptual);

}  // namespace morphkit::gib
