#include "morphkit/gib/discriminator.hpp"

#include "morphkit/common/error.hpp"

namespace morphkit::gib {

using namespace nn;

DiscriminatorSet DiscriminatorSet::create(const BlendGeneratorConfig& cfg) {
    DiscriminatorSet set;
    const int k = cfg.landmark_count;
    const int c = cfg.disc_channels;
    const bool want_lm = cfg.mode == DiscriminatorMode::Paired || cfg.mode == DiscriminatorMode::NoApp;
    const bool want_app = cfg.mode == DiscriminatorMode::Paired || cfg.mode == DiscriminatorMode::NoLm;
    if (want_lm) {
        set.members_.push_back(
            {"D_lm", std::make_unique<PatchDiscriminator>(3 + k, c, cfg.seed ^ 0xD15C1ull, "d_lm")});
    }
    if (want_app) {
        set.members_.push_back(
            {"D_app", std::make_unique<PatchDiscriminator>(6, c, cfg.seed ^ 0xD15C2ull, "d_app")});
    }
    if (cfg.mode == DiscriminatorMode::Traditional) {
        set.members_.push_back(
            {"D_trod", std::make_unique<PatchDiscriminator>(3, c, cfg.seed ^ 0xD15C3ull, "d_trod")});
    }
    return set;
}

Var DiscriminatorSet::forward(const Member& m, const Var& image, const Var& heat_lm,
                              const Var& contributing) const {
    if (m.name == "D_lm") return m.disc->forward(concat_channels({image, heat_lm}));
    if (m.name == "D_app") return m.disc->forward(concat_channels({image, contributing}));
    if (m.name == "D_trod") return m.disc->forward(image);
    throw Error("DiscriminatorSet: unknown member " + m.name);
}

std::vector<std::string> DiscriminatorSet::log_columns() const {
    std::vector<std::string> cols;
    for (const auto& m : members_) cols.push_back(m.name);
    return cols;
}

}  // namespace morphkit::gib
