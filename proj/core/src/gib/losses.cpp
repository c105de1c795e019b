#include "morphkit/gib/losses.hpp"

#include <cmath>

#include "morphkit/common/error.hpp"
#include "morphkit/common/rng.hpp"
#include "morphkit/eval/quality.hpp"

namespace morphkit::gib {

using namespace nn;

PerceptualNet::PerceptualNet(std::uint64_t seed) {
    Rng rng(seed);
    const std::vector<std::vector<int>> shapes{{8, 3, 3, 3}, {16, 8, 3, 3}, {16, 16, 3, 3}};
    for (const auto& s : shapes) {
        weights_.push_back(init_conv(s, rng));
        biases_.push_back(init_uniform({s[0]}, rng, 0.1));
    }
}

std::vector<Var> PerceptualNet::features(const Var& image) const {
    std::vector<Var> feats;
    Var t = image;
    for (std::size_t i = 0; i < weights_.size(); ++i) {
        t = tanh_act(conv2d(t, constant(weights_[i]), constant(biases_[i]), 2, 1));
        feats.push_back(t);
    }
    return feats;
}

Var PerceptualNet::loss(const Var& a, const Var& b) const {
    const std::vector<Var> fa = features(a);
    const std::vector<Var> fb = features(b);
    Var acc = mse(fa[0], fb[0]);
    for (std::size_t i = 1; i < fa.size(); ++i) acc = add(acc, mse(fa[i], fb[i]));
    return scale(acc, 1.0 / static_cast<double>(fa.size()));
}

Var ms_ssim_graph(const Var& a, const Var& b) {
    if (!a->value.same_shape(b->value))
        throw DimensionError("ms_ssim_graph: shape mismatch");
    const int h = a->value.dim(1), w = a->value.dim(2);
    const int scales = eval::ms_ssim_scale_count(w, h);
    const std::vector<double> weights = eval::ms_ssim_weights(scales);
    const std::vector<double> window = eval::gaussian_window(eval::kSsimWindow, eval::kSsimSigma);
    constexpr double kPowClamp = 1e-6;

    Var x = a, y = b;
    Var value = constant(Tensor::scalar(1.0));
    for (int s = 0; s < scales; ++s) {
        const Var mu_x = filter2d_valid(x, window);
        const Var mu_y = filter2d_valid(y, window);
        const Var sxx = sub(filter2d_valid(mul(x, x), window), mul(mu_x, mu_x));
        const Var syy = sub(filter2d_valid(mul(y, y), window), mul(mu_y, mu_y));
        const Var sxy = sub(filter2d_valid(mul(x, y), window), mul(mu_x, mu_y));
        const Var cs_map = div(add_scalar(scale(sxy, 2.0), eval::kSsimC2),
                               add_scalar(add(sxx, syy), eval::kSsimC2));
        Var term;
        if (s + 1 < scales) {
            term = mean_all(cs_map);
            x = avg_pool2(x);
            y = avg_pool2(y);
        } else {
            const Var lum_map = div(add_scalar(scale(mul(mu_x, mu_y), 2.0), eval::kSsimC1),
                                    add_scalar(add(mul(mu_x, mu_x), mul(mu_y, mu_y)), eval::kSsimC1));
            term = mean_all(mul(lum_map, cs_map));
        }
        value = mul(value, pow_const(clamp_min(term, kPowClamp), weights[static_cast<std::size_t>(s)]));
    }
    return value;
}

double total_image_blend_loss(double perceptual, double l1, double msssim, double adv,
                              const BlendGeneratorConfig& cfg) {
    if (!std::isfinite(perceptual) || !std::isfinite(l1) || !std::isfinite(msssim) ||
        !std::isfinite(adv))
        throw DivergenceError("total_image_blend_loss: non-finite component");
    return cfg.lambda_perceptual * perceptual + cfg.lambda_l1 * l1 + cfg.lambda_msssim * msssim +
           cfg.lambda_adv * adv;
}

ImageLossParts ImageLossGraph::values() const {
    ImageLossParts parts;
    parts.perceptual = scalar_of(perceptual);
    parts.l1 = scalar_of(l1);
    parts.msssim = scalar_of(msssim);
    parts.adv = adv ? scalar_of(adv) : 0.0;
    parts.total = scalar_of(total);
    return parts;
}

ImageLossGraph image_blend_loss_graph(const Var& generated, const Var& supervisor,
                                      const std::vector<Var>& disc_fake_outputs,
                                      const BlendGeneratorConfig& cfg,
                                      const PerceptualNet& perceptual) {
    if (!generated->value.same_shape(supervisor->value))
        throw DimensionError("image_blend_loss: generated/supervisor shape mismatch");

    ImageLossGraph out;
    out.perceptual = perceptual.loss(generated, supervisor);
    out.l1 = mean_abs_diff(generated, supervisor);
    out.msssim = sub(constant(Tensor::scalar(1.0)), ms_ssim_graph(generated, supervisor));

    Var total = scale(out.perceptual, cfg.lambda_perceptual);
    total = add(total, scale(out.l1, cfg.lambda_l1));
    total = add(total, scale(out.msssim, cfg.lambda_msssim));

    if (!disc_fake_outputs.empty()) {
        Var adv_acc;
        for (const Var& d : disc_fake_outputs) {
            const Var term = scale(mean_all(log_act(d)), -1.0);
            adv_acc = adv_acc ? add(adv_acc, term) : term;
        }
        out.adv = scale(adv_acc, 1.0 / static_cast<double>(disc_fake_outputs.size()));
        total = add(total, scale(out.adv, cfg.lambda_adv));
    }
    out.total = total;

    if (!std::isfinite(scalar_of(out.total)))
        throw DivergenceError("image_blend_loss: non-finite total");
    return out;
}

ImageLossParts image_blend_loss(const geom::FaceImage& generated,
                                const geom::FaceImage& supervisor,
                                const std::vector<nn::Tensor>& disc_fake_outputs,
                                const BlendGeneratorConfig& cfg,
                                const PerceptualNet& perceptual) {
    std::vector<Var> disc_vars;
    disc_vars.reserve(disc_fake_outputs.size());
    for (const auto& t : disc_fake_outputs) disc_vars.push_back(constant(t));
    const ImageLossGraph g = image_blend_loss_graph(constant(generated.to_tensor()),
                                                    constant(supervisor.to_tensor()), disc_vars,
                                                    cfg, perceptual);
    return g.values();
}

}  // namespace morphkit::gib
