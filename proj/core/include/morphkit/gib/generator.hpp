#pragma once

#include <cstdint>
#include <string>
#include <utility>

#include "morphkit/geometry/image.hpp"
#include "morphkit/geometry/landmarks.hpp"
#include "morphkit/gib/graph.hpp"
#include "morphkit/nn/params.hpp"

namespace morphkit::gib {

enum class DiscriminatorMode {
    Paired,       // landmark + appearance discriminators on paired inputs
    NoApp,        // landmark discriminator only
    NoLm,         // appearance discriminator only
    Traditional,  // single unconditional discriminator (w/ D_trod ablation)
};

std::string to_string(DiscriminatorMode mode);
DiscriminatorMode discriminator_mode_from_string(const std::string& s);

struct BlendGeneratorConfig {
    int landmark_count = 106;
    int resolution = 64;            // must be divisible by 8 (three stride-2 stages)
    int iterations = 9;             // N reasoning/aggregation rounds
    double heatmap_sigma = 1.5;     // px at 64; scaled linearly with resolution
    int appearance_channels = 8;    // C_a
    int shape_channels = 8;         // C_s
    int graph_nodes = 106;          // V nodes per landmark set
    int gcn_hidden = 16;
    int disc_channels = 6;
    double alpha = 0.5;             // morphing factor
    double lambda_perceptual = 10.0;
    double lambda_l1 = 10.0;
    double lambda_msssim = 1.0;
    double lambda_adv = 5.0;
    double generator_lr = 2e-4;
    double discriminator_lr = 2e-4;
    DiscriminatorMode mode = DiscriminatorMode::Paired;
    std::uint64_t seed = 1;
    int steps = 500;

    double sigma_px() const { return heatmap_sigma * resolution / 64.0; }
    void validate() const;
};

/// Landmark-guided image blending generator: appearance/shape encoders, N
/// landmark-graph reasoning + landmark-appearance aggregation blocks (one
/// parameter set per iteration), and an upsampling decoder with a bounded
/// output activation. One generator serves both contributing subjects.
class Generator {
public:
    explicit Generator(const BlendGeneratorConfig& cfg);

    nn::Var encode_appearance(const nn::Var& image) const;
    nn::Var encode_shape(const nn::Var& heatmaps) const;

    /// Landmark-graph reasoning for block `n`: concatenated shape codes
    /// -> bipartite GCN -> sigmoid attention map [1, H_f, W_f].
    nn::Var reasoning_attention(int block, const nn::Var& f_lm, const nn::Var& f_l) const;

    /// Shape-code update for block `n`; returns the refreshed (morphed, contributing) codes.
    std::pair<nn::Var, nn::Var> update_shape_codes(int block, const nn::Var& f_i,
                                                   const nn::Var& f_lm, const nn::Var& f_l) const;

    nn::Var decode(const nn::Var& appearance_code) const;

    /// Full N-iteration pass producing one intermediate morph (differentiable).
    nn::Var generate_graph(const nn::Var& image, const nn::Var& heat_l,
                           const nn::Var& heat_lm) const;

    /// Inference wrapper over generate_graph.
    geom::FaceImage generate_intermediate(const geom::FaceImage& image,
                                          const geom::LandmarkSet& l,
                                          const geom::LandmarkSet& l_m) const;

    nn::ParamStore& params() { return params_; }
    const nn::ParamStore& params() const { return params_; }
    const BlendGeneratorConfig& config() const { return cfg_; }
    const BipartiteGraph& graph() const { return graph_; }

private:
    BlendGeneratorConfig cfg_;
    int feat_hw_ = 0;  // spatial size after the three stride-2 stages
    BipartiteGraph graph_;
    nn::Var adjacency_;  // constant leaf, shared across graph builds
    nn::ParamStore params_;
};

/// Landmark-appearance aggregation: A (x) F + F, the residual attention gate.
nn::Var landmark_appearance_aggregation(const nn::Var& attention, const nn::Var& appearance);

/// Final blend: alpha * m1 + (1 - alpha) * m2 (plain convex
/// combination; see the config's morphing factor).
geom::FaceImage final_morph(const geom::FaceImage& m1, const geom::FaceImage& m2, double alpha);

/// Patch-level conv classifier emitting per-patch realness probabilities in
/// (0,1); pairs are channel-concatenated by the caller.
class PatchDiscriminator {
public:
    PatchDiscriminator(int in_channels, int base_channels, std::uint64_t seed,
                       const std::string& prefix);

    nn::Var forward(const nn::Var& input) const;

    nn::ParamStore& params() { return params_; }
    const nn::ParamStore& params() const { return params_; }
    int in_channels() const { return in_channels_; }

private:
    int in_channels_;
    nn::ParamStore params_;
};

}  // namespace morphkit::gib
