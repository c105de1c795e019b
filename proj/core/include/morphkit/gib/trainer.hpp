#pragma once

#include <iosfwd>
#include <memory>

#include "morphkit/gib/discriminator.hpp"
#include "morphkit/gib/losses.hpp"
#include "morphkit/nn/adam.hpp"

namespace morphkit::gib {

/// One training/generation unit: an aligned pair, its blended landmark
/// target L_m, and the per-subject classical-warp supervisors built on L_m.
struct ImagePairSample {
    std::string id;
    geom::FaceImage img1, img2;
    geom::LandmarkSet l1, l2, lm;
    geom::FaceImage sup1, sup2;
};

struct ImageTrainLogRow {
    std::int64_t step = 0;
    double l_per = 0.0, l_l1 = 0.0, l_msssim = 0.0, l_adv = 0.0, total = 0.0;
    std::vector<std::pair<std::string, double>> d_losses;  // per active discriminator
};

std::string gib_config_to_json(const BlendGeneratorConfig& cfg);
BlendGeneratorConfig gib_config_from_json(const std::string& json);

/// Adversarial trainer for the landmark-guided image blending module.
/// Checkpoints (magic "GIB1") carry the generator, every active
/// discriminator, and all optimizer state; round-trips are bit-exact.
class ImageBlenderTrainer {
public:
    explicit ImageBlenderTrainer(const BlendGeneratorConfig& cfg);

    static std::unique_ptr<ImageBlenderTrainer> from_checkpoint(const std::string& path);

    std::vector<ImageTrainLogRow> train(const std::vector<ImagePairSample>& pairs, int steps);

    void save_checkpoint(const std::string& path) const;
    void save_checkpoint(std::ostream& out) const;

    /// CSV header matching the active discriminator columns.
    std::string log_header() const;

    const Generator& generator() const { return gen_; }
    const DiscriminatorSet& discriminators() const { return discs_; }
    const BlendGeneratorConfig& config() const { return cfg_; }
    const PerceptualNet& perceptual() const { return perceptual_; }
    std::int64_t step_counter() const { return step_counter_; }

private:
    void load_state(std::istream& in);

    BlendGeneratorConfig cfg_;
    Generator gen_;
    DiscriminatorSet discs_;
    PerceptualNet perceptual_;
    nn::Adam opt_g_;
    std::vector<nn::Adam> opt_d_;  // one per active discriminator
    std::int64_t step_counter_ = 0;
};

}  // namespace morphkit::gib
