#pragma once

#include <memory>

#include "morphkit/gib/generator.hpp"

namespace morphkit::gib {

/// The discriminators active under a given mode, with their paired-input
/// assembly. In `paired` mode the landmark discriminator sees
/// (image, L_m heatmaps) and the appearance discriminator (image,
/// contributing image); `traditional` uses one unconditional single-image
/// discriminator (the w/ D_trod ablation).
class DiscriminatorSet {
public:
    struct Member {
        std::string name;  // log column: D_lm / D_app / D_trod
        std::unique_ptr<PatchDiscriminator> disc;
    };

    static DiscriminatorSet create(const BlendGeneratorConfig& cfg);

    /// discriminate_pair: probability map for one input pair, assembled for
    /// the member's role.
    nn::Var forward(const Member& m, const nn::Var& image, const nn::Var& heat_lm,
                    const nn::Var& contributing) const;

    std::vector<Member>& members() { return members_; }
    const std::vector<Member>& members() const { return members_; }
    std::vector<std::string> log_columns() const;

private:
    std::vector<Member> members_;
};

}  // namespace morphkit::gib
