#pragma once

#include <iosfwd>
#include <memory>
#include <string>

#include "morphkit/lmb/blender.hpp"
#include "morphkit/nn/adam.hpp"

namespace morphkit::lmb {

struct LandmarkPair {
    std::string id;
    geom::LandmarkSet l1;
    geom::LandmarkSet l2;
};

struct LandmarkTrainLogRow {
    std::int64_t step = 0;
    double l_gd = 0.0, l_gb = 0.0, l_adv = 0.0, total = 0.0, d_loss = 0.0;
};

/// Alternating generator/discriminator training of the landmark blending
/// module against D_TF, Adam on both sides. Checkpoints carry network and
/// optimizer state and round-trip bit-exactly (magic "LMB1").
class LandmarkBlenderTrainer {
public:
    explicit LandmarkBlenderTrainer(const BlenderNetConfig& cfg);

    static std::unique_ptr<LandmarkBlenderTrainer> from_checkpoint(const std::string& path);

    /// Runs `steps` additional steps; the step counter continues across
    /// resumed runs. Throws DivergenceError (with parameters restored to the
    /// last finite step) if any loss goes non-finite.
    std::vector<LandmarkTrainLogRow> train(const std::vector<LandmarkPair>& pairs,
                                           const std::vector<geom::LandmarkSet>& real_pool,
                                           int steps);

    void save_checkpoint(const std::string& path) const;
    void save_checkpoint(std::ostream& out) const;

    const LandmarkBlender& blender() const { return blender_; }
    const LandmarkDiscriminator& discriminator() const { return disc_; }
    const BlenderNetConfig& config() const { return cfg_; }
    std::int64_t step_counter() const { return step_counter_; }

private:
    void load_state(std::istream& in);

    BlenderNetConfig cfg_;
    LandmarkBlender blender_;
    LandmarkDiscriminator disc_;
    nn::Adam opt_g_;
    nn::Adam opt_d_;
    std::int64_t step_counter_ = 0;
};

std::string blender_config_to_json(const BlenderNetConfig& cfg);
BlenderNetConfig blender_config_from_json(const std::string& json);

/// Convenience wrapper: fresh trainer, cfg.steps steps, returns the trainer
/// (checkpoint source) plus the per-step loss log.
std::pair<std::unique_ptr<LandmarkBlenderTrainer>, std::vector<LandmarkTrainLogRow>>
train_landmark_blender(const std::vector<LandmarkPair>& pairs,
                       const std::vector<geom::LandmarkSet>& real_pool,
                       const BlenderNetConfig& cfg);

}  // namespace morphkit::lmb
