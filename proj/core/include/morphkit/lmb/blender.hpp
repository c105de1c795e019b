#pragma once

#include <cstdint>
#include <utility>

#include "morphkit/lmb/losses.hpp"
#include "morphkit/nn/params.hpp"

namespace morphkit::lmb {

struct BlenderNetConfig {
    int landmark_count = 106;
    std::vector<int> encoder_hidden{128, 96};
    int code_dim = 64;
    std::vector<int> disc_hidden{96, 64};
    double learning_rate = 3e-4;       // encoder/decoder Adam rate
    double disc_learning_rate = 3e-4;  // D_TF Adam rate
    LandmarkLossWeights weights;       // 100 / 10 / 0.1
    int batch_size = 8;
    int steps = 500;
    std::uint64_t seed = 1;
    // small random init lets smoke training demonstrate a loss drop; the
    // zero-init variant starts exactly at the traditional landmark average
    bool zero_init_shift_head = false;
    double shift_init_scale = 0.05;
};

/// Encoder-decoder predicting the two point-wise shift fields from a pair of
/// landmark sets: 3 fully-connected tanh layers down to a geometry code,
/// then one fully-connected head per shift field.
class LandmarkBlender {
public:
    explicit LandmarkBlender(const BlenderNetConfig& cfg);

    /// Differentiable forward pass; returns the two flat [2K] shift vectors.
    std::pair<nn::Var, nn::Var> forward(const nn::Var& l1_flat, const nn::Var& l2_flat) const;

    /// Inference: deterministic shifts for a landmark pair.
    std::pair<LandmarkShift, LandmarkShift> predict_shifts(const geom::LandmarkSet& l1,
                                                           const geom::LandmarkSet& l2) const;

    /// predict_shifts and the shifted-average blend in one call.
    geom::LandmarkSet blend(const geom::LandmarkSet& l1, const geom::LandmarkSet& l2) const;

    nn::ParamStore& params() { return params_; }
    const nn::ParamStore& params() const { return params_; }
    const BlenderNetConfig& config() const { return cfg_; }

private:
    BlenderNetConfig cfg_;
    nn::ParamStore params_;
};

/// D_TF: flattened landmarks -> realness probability, clamped into
/// [1e-7, 1-1e-7] so downstream logs stay finite.
class LandmarkDiscriminator {
public:
    explicit LandmarkDiscriminator(const BlenderNetConfig& cfg);

    nn::Var forward(const nn::Var& l_flat) const;
    double discriminate(const geom::LandmarkSet& l) const;

    nn::ParamStore& params() { return params_; }
    const nn::ParamStore& params() const { return params_; }

private:
    int landmark_count_;
    nn::ParamStore params_;
};

}  // namespace morphkit::lmb
