#include "morphkit/lmb/losses.hpp"

#include <cmath>

#include "morphkit/common/error.hpp"

namespace morphkit::lmb {

namespace {

void check_counts(const geom::LandmarkSet& a, const geom::LandmarkSet& b, const char* op) {
    if (a.count() != b.count())
        throw DimensionError(std::string(op) + ": landmark count mismatch");
}

double l1_distance(const geom::LandmarkSet& a, const geom::LandmarkSet& b) {
    double acc = 0.0;
    for (int i = 0; i < a.count(); ++i) {
        acc += std::fabs(a.point(i).x - b.point(i).x);
        acc += std::fabs(a.point(i).y - b.point(i).y);
    }
    return acc;
}

}  // namespace

geom::LandmarkSet blend_landmarks(const geom::LandmarkSet& l1, const geom::LandmarkSet& l2,
                                  const LandmarkShift& s1, const LandmarkShift& s2) {
    check_counts(l1, l2, "blend_landmarks");
    if (s1.count() != l1.count() || s2.count() != l2.count())
        throw DimensionError("blend_landmarks: shift count mismatch");
    std::vector<geom::Vec2> pts(static_cast<std::size_t>(l1.count()));
    for (int i = 0; i < l1.count(); ++i) {
        const geom::Vec2 p1 = l1.point(i) + s1.deltas[static_cast<std::size_t>(i)];
        const geom::Vec2 p2 = l2.point(i) + s2.deltas[static_cast<std::size_t>(i)];
        pts[static_cast<std::size_t>(i)] = 0.5 * (p1 + p2);
    }
    return geom::LandmarkSet(std::move(pts));
}

double geometric_distance_loss(const geom::LandmarkSet& lm, const geom::LandmarkSet& l1,
                               const geom::LandmarkSet& l2) {
    check_counts(lm, l1, "geometric_distance_loss");
    check_counts(lm, l2, "geometric_distance_loss");
    return 0.5 * (l1_distance(lm, l1) + l1_distance(lm, l2));
}

double geometric_balance_loss(const geom::LandmarkSet& lm, const geom::LandmarkSet& l1,
                              const geom::LandmarkSet& l2) {
    check_counts(lm, l1, "geometric_balance_loss");
    check_counts(lm, l2, "geometric_balance_loss");
    return std::fabs(l1_distance(lm, l1) - l1_distance(lm, l2));
}

double landmark_adversarial_loss(double d_real, double d_fake, AdversarialSide side) {
    if (!(d_real > 0.0 && d_real < 1.0 && d_fake > 0.0 && d_fake < 1.0))
        throw DimensionError("landmark_adversarial_loss: probabilities must be strictly in (0,1)");
    if (side == AdversarialSide::Discriminator)
        return -(std::log(d_real) + std::log(1.0 - d_fake));
    return -std::log(d_fake);
}

double total_landmark_loss(double l_gd, double l_gb, double l_adv,
                           const LandmarkLossWeights& w) {
    if (!std::isfinite(l_gd) || !std::isfinite(l_gb) || !std::isfinite(l_adv))
        throw DivergenceError("total_landmark_loss: non-finite component");
    return w.lambda_gd * l_gd + w.lambda_gb * l_gb + w.lambda_adv * l_adv;
}

nn::Var flatten_landmarks(const geom::LandmarkSet& l) {
    nn::Tensor t({2 * l.count()});
    for (int i = 0; i < l.count(); ++i) {
        t[2 * i] = l.point(i).x;
        t[2 * i + 1] = l.point(i).y;
    }
    return nn::constant(std::move(t));
}

nn::Var geometric_distance_loss_graph(const nn::Var& lm_flat, const nn::Var& l1_flat,
                                      const nn::Var& l2_flat) {
    using namespace nn;
    const Var d1 = sum_all(abs_act(sub(lm_flat, l1_flat)));
    const Var d2 = sum_all(abs_act(sub(lm_flat, l2_flat)));
    return scale(add(d1, d2), 0.5);
}

nn::Var geometric_balance_loss_graph(const nn::Var& lm_flat, const nn::Var& l1_flat,
                                     const nn::Var& l2_flat) {
    using namespace nn;
    const Var d1 = sum_all(abs_act(sub(lm_flat, l1_flat)));
    const Var d2 = sum_all(abs_act(sub(lm_flat, l2_flat)));
    return abs_act(sub(d1, d2));
}

}  // namespace morphkit::lmb
