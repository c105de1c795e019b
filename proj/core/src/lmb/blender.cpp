#include "morphkit/lmb/blender.hpp"

#include "morphkit/common/error.hpp"

namespace morphkit::lmb {

using namespace nn;

LandmarkBlender::LandmarkBlender(const BlenderNetConfig& cfg) : cfg_(cfg) {
    if (cfg.landmark_count <= 0) throw ConfigError("LandmarkBlender: K must be positive");
    if (cfg.encoder_hidden.size() != 2)
        throw ConfigError("LandmarkBlender: encoder needs exactly two hidden widths");
    Rng rng(cfg.seed);
    const int in = 4 * cfg.landmark_count;
    const int h1 = cfg.encoder_hidden[0];
    const int h2 = cfg.encoder_hidden[1];
    const int code = cfg.code_dim;
    const int out = 2 * cfg.landmark_count;

    params_.add("enc.w1", init_xavier({h1, in}, rng));
    params_.add("enc.b1", Tensor::zeros({h1}));
    params_.add("enc.w2", init_xavier({h2, h1}, rng));
    params_.add("enc.b2", Tensor::zeros({h2}));
    params_.add("enc.w3", init_xavier({code, h2}, rng));
    params_.add("enc.b3", Tensor::zeros({code}));

    const double s = cfg.zero_init_shift_head ? 0.0 : cfg.shift_init_scale;
    params_.add("head1.w", init_uniform({out, code}, rng, s));
    params_.add("head1.b", Tensor::zeros({out}));
    params_.add("head2.w", init_uniform({out, code}, rng, s));
    params_.add("head2.b", Tensor::zeros({out}));
}

std::pair<Var, Var> LandmarkBlender::forward(const Var& l1_flat, const Var& l2_flat) const {
    const int expect = 2 * cfg_.landmark_count;
    if (l1_flat->value.dim(0) != expect || l2_flat->value.dim(0) != expect)
        throw DimensionError("LandmarkBlender::forward: landmark count mismatch");
    const Var x = concat_vec({l1_flat, l2_flat});
    const Var a1 = tanh_act(linear(x, params_.get("enc.w1"), params_.get("enc.b1")));
    const Var a2 = tanh_act(linear(a1, params_.get("enc.w2"), params_.get("enc.b2")));
    const Var code = tanh_act(linear(a2, params_.get("enc.w3"), params_.get("enc.b3")));
    const Var s1 = linear(code, params_.get("head1.w"), params_.get("head1.b"));
    const Var s2 = linear(code, params_.get("head2.w"), params_.get("head2.b"));
    return {s1, s2};
}

std::pair<LandmarkShift, LandmarkShift> LandmarkBlender::predict_shifts(
    const geom::LandmarkSet& l1, const geom::LandmarkSet& l2) const {
    if (l1.count() != cfg_.landmark_count || l2.count() != cfg_.landmark_count)
        throw DimensionError("predict_shifts: landmark count mismatch with config");
    const auto [s1, s2] = forward(flatten_landmarks(l1), flatten_landmarks(l2));
    auto to_shift = [](const Var& v) {
        const int k = v->value.dim(0) / 2;
        LandmarkShift s = LandmarkShift::zeros(k);
        for (int i = 0; i < k; ++i)
            s.deltas[static_cast<std::size_t>(i)] = {v->value[2 * i], v->value[2 * i + 1]};
        return s;
    };
    return {to_shift(s1), to_shift(s2)};
}

geom::LandmarkSet LandmarkBlender::blend(const geom::LandmarkSet& l1,
                                         const geom::LandmarkSet& l2) const {
    const auto [s1, s2] = predict_shifts(l1, l2);
    return blend_landmarks(l1, l2, s1, s2);
}

LandmarkDiscriminator::LandmarkDiscriminator(const BlenderNetConfig& cfg)
    : landmark_count_(cfg.landmark_count) {
    if (cfg.disc_hidden.size() != 2)
        throw ConfigError("LandmarkDiscriminator: needs exactly two hidden widths");
    Rng rng(cfg.seed ^ 0x9e3779b97f4a7c15ull);
    const int in = 2 * cfg.landmark_count;
    const int h1 = cfg.disc_hidden[0];
    const int h2 = cfg.disc_hidden[1];
    params_.add("d.w1", init_xavier({h1, in}, rng));
    params_.add("d.b1", Tensor::zeros({h1}));
    params_.add("d.w2", init_xavier({h2, h1}, rng));
    params_.add("d.b2", Tensor::zeros({h2}));
    params_.add("d.w3", init_xavier({1, h2}, rng));
    params_.add("d.b3", Tensor::zeros({1}));
}

Var LandmarkDiscriminator::forward(const Var& l_flat) const {
    if (l_flat->value.dim(0) != 2 * landmark_count_)
        throw DimensionError("LandmarkDiscriminator: landmark count mismatch");
    const Var a1 = leaky_relu(linear(l_flat, params_.get("d.w1"), params_.get("d.b1")), 0.2);
    const Var a2 = leaky_relu(linear(a1, params_.get("d.w2"), params_.get("d.b2")), 0.2);
    const Var p = sigmoid_act(linear(a2, params_.get("d.w3"), params_.get("d.b3")));
    return clamp_range(p, 1e-7, 1.0 - 1e-7);
}

double LandmarkDiscriminator::discriminate(const geom::LandmarkSet& l) const {
    return scalar_of(forward(flatten_landmarks(l)));
}

}  // namespace morphkit::lmb
