#include "morphkit/gib/generator.hpp"

#include "morphkit/common/error.hpp"
#include "morphkit/gib/heatmap.hpp"

namespace morphkit::gib {

using namespace nn;

std::string to_string(DiscriminatorMode mode) {
    switch (mode) {
        case DiscriminatorMode::Paired: return "paired";
        case DiscriminatorMode::NoApp: return "no_app";
        case DiscriminatorMode::NoLm: return "no_lm";
        case DiscriminatorMode::Traditional: return "traditional";
    }
    return "paired";
}

DiscriminatorMode discriminator_mode_from_string(const std::string& s) {
    if (s == "paired") return DiscriminatorMode::Paired;
    if (s == "no_app") return DiscriminatorMode::NoApp;
    if (s == "no_lm") return DiscriminatorMode::NoLm;
    if (s == "traditional") return DiscriminatorMode::Traditional;
    throw ConfigError("unknown discriminator mode: " + s +
                      " (expected paired|no_app|no_lm|traditional)");
}

void BlendGeneratorConfig::validate() const {
    if (landmark_count <= 0) throw ConfigError("BlendGeneratorConfig: K must be positive");
    if (resolution < 16 || resolution % 8 != 0)
        throw ConfigError("BlendGeneratorConfig: resolution must be >= 16 and divisible by 8");
    if (iterations < 1) throw ConfigError("BlendGeneratorConfig: N must be >= 1");
    if (alpha < 0.0 || alpha > 1.0) throw ConfigError("BlendGeneratorConfig: alpha outside [0,1]");
    if (heatmap_sigma <= 0.0) throw ConfigError("BlendGeneratorConfig: sigma must be positive");
    if (lambda_perceptual < 0 || lambda_l1 < 0 || lambda_msssim < 0 || lambda_adv < 0)
        throw ConfigError("BlendGeneratorConfig: loss weights must be non-negative");
    if (graph_nodes <= 0 || gcn_hidden <= 0 || appearance_channels <= 0 || shape_channels <= 0)
        throw ConfigError("BlendGeneratorConfig: channel/node counts must be positive");
}

Generator::Generator(const BlendGeneratorConfig& cfg)
    : cfg_(cfg), feat_hw_(cfg.resolution / 8),
      graph_(BipartiteGraph::complete(cfg.graph_nodes)) {
    cfg_.validate();
    adjacency_ = constant(graph_.adjacency);

    Rng rng(cfg.seed);
    const int ca = cfg.appearance_channels;
    const int cs = cfg.shape_channels;
    const int k = cfg.landmark_count;
    const int v = cfg.graph_nodes;
    const int g = cfg.gcn_hidden;
    const int p = feat_hw_ * feat_hw_;

    params_.add("enc_app.w1", init_conv({ca, 3, 3, 3}, rng));
    params_.add("enc_app.b1", Tensor::zeros({ca}));
    params_.add("enc_app.w2", init_conv({ca, ca, 3, 3}, rng));
    params_.add("enc_app.b2", Tensor::zeros({ca}));
    params_.add("enc_app.w3", init_conv({ca, ca, 3, 3}, rng));
    params_.add("enc_app.b3", Tensor::zeros({ca}));

    params_.add("enc_shape.w1", init_conv({cs, k, 3, 3}, rng));
    params_.add("enc_shape.b1", Tensor::zeros({cs}));
    params_.add("enc_shape.w2", init_conv({cs, cs, 3, 3}, rng));
    params_.add("enc_shape.b2", Tensor::zeros({cs}));
    params_.add("enc_shape.w3", init_conv({cs, cs, 3, 3}, rng));
    params_.add("enc_shape.b3", Tensor::zeros({cs}));

    for (int n = 0; n < cfg.iterations; ++n) {
        const std::string b = "block" + std::to_string(n) + ".";
        params_.add(b + "proj_m", init_xavier({v, p}, rng));
        params_.add(b + "proj_c", init_xavier({v, p}, rng));
        params_.add(b + "gcn_w1", init_xavier({2 * cs, g}, rng));
        params_.add(b + "gcn_b1", Tensor::zeros({g}));
        params_.add(b + "gcn_w2", init_xavier({g, g}, rng));
        params_.add(b + "gcn_b2", Tensor::zeros({g}));
        params_.add(b + "reproj_m", init_xavier({v, p}, rng));
        params_.add(b + "reproj_c", init_xavier({v, p}, rng));
        params_.add(b + "att_w", init_conv({1, g, 1, 1}, rng));
        params_.add(b + "att_b", Tensor::zeros({1}));
        params_.add(b + "upd_w", init_conv({2 * cs, ca + 2 * cs, 3, 3}, rng));
        params_.add(b + "upd_b", Tensor::zeros({2 * cs}));
    }

    params_.add("dec.w1", init_conv({ca, ca, 3, 3}, rng));
    params_.add("dec.b1", Tensor::zeros({ca}));
    params_.add("dec.w2", init_conv({ca, ca, 3, 3}, rng));
    params_.add("dec.b2", Tensor::zeros({ca}));
    params_.add("dec.w3", init_conv({ca, ca, 3, 3}, rng));
    params_.add("dec.b3", Tensor::zeros({ca}));
    params_.add("dec.out_w", init_conv({3, ca, 3, 3}, rng));
    params_.add("dec.out_b", Tensor::zeros({3}));
}

Var Generator::encode_appearance(const Var& image) const {
    if (image->value.rank() != 3 || image->value.dim(0) != 3 ||
        image->value.dim(1) != cfg_.resolution || image->value.dim(2) != cfg_.resolution)
        throw DimensionError("encode_appearance: expected [3,res,res] input");
    Var t = tanh_act(conv2d(image, params_.get("enc_app.w1"), params_.get("enc_app.b1"), 2, 1));
    t = tanh_act(conv2d(t, params_.get("enc_app.w2"), params_.get("enc_app.b2"), 2, 1));
    t = tanh_act(conv2d(t, params_.get("enc_app.w3"), params_.get("enc_app.b3"), 2, 1));
    return t;
}

Var Generator::encode_shape(const Var& heatmaps) const {
    if (heatmaps->value.rank() != 3 || heatmaps->value.dim(0) != cfg_.landmark_count ||
        heatmaps->value.dim(1) != cfg_.resolution || heatmaps->value.dim(2) != cfg_.resolution)
        throw DimensionError("encode_shape: expected [K,res,res] heatmap stack");
    Var t = tanh_act(conv2d(heatmaps, params_.get("enc_shape.w1"), params_.get("enc_shape.b1"), 2, 1));
    t = tanh_act(conv2d(t, params_.get("enc_shape.w2"), params_.get("enc_shape.b2"), 2, 1));
    t = tanh_act(conv2d(t, params_.get("enc_shape.w3"), params_.get("enc_shape.b3"), 2, 1));
    return t;
}

Var Generator::reasoning_attention(int block, const Var& f_lm, const Var& f_l) const {
    if (!f_lm->value.same_shape(f_l->value))
        throw DimensionError("reasoning_attention: shape codes differ in shape");
    const std::string b = "block" + std::to_string(block) + ".";
    const int cs2 = 2 * cfg_.shape_channels;
    const int v = cfg_.graph_nodes;
    const int g = cfg_.gcn_hidden;
    const int h = f_lm->value.dim(1), w = f_lm->value.dim(2);
    const int p = h * w;

    const Var cat = concat_channels({f_lm, f_l});
    const Var flat = reshape(cat, {cs2, p});  // [2Cs, P]

    // spatial -> node projections, one per node set: [V,P] x [P,2Cs] -> [V,2Cs]
    const Var xm = matmul(params_.get(b + "proj_m"), transpose2d(flat));
    const Var xc = matmul(params_.get(b + "proj_c"), transpose2d(flat));
    const Var x = reshape(concat_vec({reshape(xm, {v * cs2}), reshape(xc, {v * cs2})}),
                          {2 * v, cs2});

    const Var h1 = gcn_layer(x, adjacency_, params_.get(b + "gcn_w1"), params_.get(b + "gcn_b1"), true);
    const Var h2 = gcn_layer(h1, adjacency_, params_.get(b + "gcn_w2"), params_.get(b + "gcn_b2"), true);

    // node -> spatial re-projection and 1x1 reduction to one channel
    const Var h2_flat = reshape(h2, {2 * v * g});
    const Var nm = reshape(slice_vec(h2_flat, 0, v * g), {v, g});
    const Var nc = reshape(slice_vec(h2_flat, v * g, 2 * v * g), {v, g});
    const Var spatial = add(matmul(transpose2d(nm), params_.get(b + "reproj_m")),
                            matmul(transpose2d(nc), params_.get(b + "reproj_c")));  // [G, P]
    const Var smap = reshape(spatial, {g, h, w});
    return sigmoid_act(conv2d(smap, params_.get(b + "att_w"), params_.get(b + "att_b"), 1, 0));
}

std::pair<Var, Var> Generator::update_shape_codes(int block, const Var& f_i, const Var& f_lm,
                                                  const Var& f_l) const {
    const std::string b = "block" + std::to_string(block) + ".";
    const int cs = cfg_.shape_channels;
    const Var cat = concat_channels({f_i, f_lm, f_l});
    const Var u = tanh_act(conv2d(cat, params_.get(b + "upd_w"), params_.get(b + "upd_b"), 1, 1));
    return {slice_channels(u, 0, cs), slice_channels(u, cs, 2 * cs)};
}

Var Generator::decode(const Var& appearance_code) const {
    Var d = appearance_code;
    d = tanh_act(conv2d(upsample_nearest2(d), params_.get("dec.w1"), params_.get("dec.b1"), 1, 1));
    d = tanh_act(conv2d(upsample_nearest2(d), params_.get("dec.w2"), params_.get("dec.b2"), 1, 1));
    d = tanh_act(conv2d(upsample_nearest2(d), params_.get("dec.w3"), params_.get("dec.b3"), 1, 1));
    return sigmoid_act(conv2d(d, params_.get("dec.out_w"), params_.get("dec.out_b"), 1, 1));
}

Var Generator::generate_graph(const Var& image, const Var& heat_l, const Var& heat_lm) const {
    Var f_i = encode_appearance(image);
    Var f_l = encode_shape(heat_l);
    Var f_lm = encode_shape(heat_lm);
    for (int n = 0; n < cfg_.iterations; ++n) {
        const Var att = reasoning_attention(n, f_lm, f_l);
        f_i = landmark_appearance_aggregation(att, f_i);
        auto [new_lm, new_l] = update_shape_codes(n, f_i, f_lm, f_l);
        f_lm = std::move(new_lm);
        f_l = std::move(new_l);
    }
    return decode(f_i);
}

geom::FaceImage Generator::generate_intermediate(const geom::FaceImage& image,
                                                 const geom::LandmarkSet& l,
                                                 const geom::LandmarkSet& l_m) const {
    if (image.width() != cfg_.resolution || image.height() != cfg_.resolution)
        throw DimensionError("generate_intermediate: image does not match configured resolution");
    const Var img = constant(image.to_tensor());
    const Var hl = constant(render_heatmaps(l, cfg_.resolution, cfg_.sigma_px()));
    const Var hlm = constant(render_heatmaps(l_m, cfg_.resolution, cfg_.sigma_px()));
    return geom::FaceImage::from_tensor(generate_graph(img, hl, hlm)->value);
}

Var landmark_appearance_aggregation(const Var& attention, const Var& appearance) {
    return add(broadcast_mul(attention, appearance), appearance);
}

geom::FaceImage final_morph(const geom::FaceImage& m1, const geom::FaceImage& m2, double alpha) {
    return geom::alpha_blend(m1, m2, alpha);
}

PatchDiscriminator::PatchDiscriminator(int in_channels, int base_channels, std::uint64_t seed,
                                       const std::string& prefix)
    : in_channels_(in_channels) {
    Rng rng(seed);
    const int c = base_channels;
    params_.add(prefix + ".w1", init_conv({c, in_channels, 3, 3}, rng));
    params_.add(prefix + ".b1", Tensor::zeros({c}));
    params_.add(prefix + ".w2", init_conv({2 * c, c, 3, 3}, rng));
    params_.add(prefix + ".b2", Tensor::zeros({2 * c}));
    params_.add(prefix + ".w3", init_conv({2 * c, 2 * c, 3, 3}, rng));
    params_.add(prefix + ".b3", Tensor::zeros({2 * c}));
    params_.add(prefix + ".out_w", init_conv({1, 2 * c, 3, 3}, rng));
    params_.add(prefix + ".out_b", Tensor::zeros({1}));
}

Var PatchDiscriminator::forward(const Var& input) const {
    if (input->value.rank() != 3 || input->value.dim(0) != in_channels_)
        throw DimensionError("PatchDiscriminator: channel count mismatch");
    const std::string& prefix = params_.name(0).substr(0, params_.name(0).find('.'));
    Var t = leaky_relu(conv2d(input, params_.get(prefix + ".w1"), params_.get(prefix + ".b1"), 2, 1), 0.2);
    t = leaky_relu(conv2d(t, params_.get(prefix + ".w2"), params_.get(prefix + ".b2"), 2, 1), 0.2);
    t = leaky_relu(conv2d(t, params_.get(prefix + ".w3"), params_.get(prefix + ".b3"), 2, 1), 0.2);
    const Var p = sigmoid_act(conv2d(t, params_.get(prefix + ".out_w"), params_.get(prefix + ".out_b"), 1, 1));
    return clamp_range(p, 1e-7, 1.0 - 1e-7);
}

}  // namespace morphkit::gib
