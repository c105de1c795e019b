#pragma once

#include "morphkit/geometry/landmarks.hpp"
#include "morphkit/nn/ops.hpp"

namespace morphkit::lmb {

/// Point-wise shifts applied to a landmark set, in normalized coordinates.
struct LandmarkShift {
    std::vector<geom::Vec2> deltas;

    int count() const { return static_cast<int>(deltas.size()); }
    static LandmarkShift zeros(int k) { return {std::vector<geom::Vec2>(static_cast<std::size_t>(k))}; }
};

/// L_m = ((l1 + s1) + (l2 + s2)) / 2, point-wise.
geom::LandmarkSet blend_landmarks(const geom::LandmarkSet& l1, const geom::LandmarkSet& l2,
                                  const LandmarkShift& s1, const LandmarkShift& s2);

/// (||lm - l1||_1 + ||lm - l2||_1) / 2 where ||.||_1 sums absolute
/// differences over all 2K coordinates.
double geometric_distance_loss(const geom::LandmarkSet& lm, const geom::LandmarkSet& l1,
                               const geom::LandmarkSet& l2);

/// | ||lm - l1||_1 - ||lm - l2||_1 |
double geometric_balance_loss(const geom::LandmarkSet& lm, const geom::LandmarkSet& l1,
                              const geom::LandmarkSet& l2);

enum class AdversarialSide { Generator, Discriminator };

/// Non-saturating GAN loss on post-sigmoid probabilities (strictly inside
/// (0,1); callers clamp at 1e-7). Discriminator: -[log d_real + log(1-d_fake)].
/// Generator: -log d_fake.
double landmark_adversarial_loss(double d_real, double d_fake, AdversarialSide side);

struct LandmarkLossWeights {
    double lambda_gd = 100.0;
    double lambda_gb = 10.0;
    double lambda_adv = 0.1;
};

/// lambda_1 L_GD + lambda_2 L_GB + lambda_3 L_adv; components must be finite.
double total_landmark_loss(double l_gd, double l_gb, double l_adv,
                           const LandmarkLossWeights& w);

// ---- autodiff counterparts used by the trainer (and by gradient checks) ----
nn::Var flatten_landmarks(const geom::LandmarkSet& l);  // constant [2K]
nn::Var geometric_distance_loss_graph(const nn::Var& lm_flat, const nn::Var& l1_flat,
                                      const nn::Var& l2_flat);
nn::Var geometric_balance_loss_graph(const nn::Var& lm_flat, const nn::Var& l1_flat,
                                     const nn::Var& l2_flat);

}  // namespace morphkit::lmb
