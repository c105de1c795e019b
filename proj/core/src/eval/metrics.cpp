#include "morphkit/eval/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "morphkit/common/error.hpp"

namespace morphkit::eval {

double threshold_at_far(std::vector<double> impostor_scores, double far_target) {
    if (impostor_scores.empty()) throw DimensionError("threshold_at_far: empty impostor scores");
    if (!(far_target > 0.0 && far_target < 1.0))
        throw ConfigError("threshold_at_far: far_target must be in (0,1)");
    std::sort(impostor_scores.begin(), impostor_scores.end());
    const double n = static_cast<double>(impostor_scores.size());
    for (std::size_t i = 0; i < impostor_scores.size(); ++i) {
        const double tau = impostor_scores[i];
        // count of scores strictly above tau
        const auto above = impostor_scores.end() -
                           std::upper_bound(impostor_scores.begin(), impostor_scores.end(), tau);
        if (static_cast<double>(above) / n <= far_target) return tau;
    }
    return impostor_scores.back();  // frac(> max) == 0, so this is never reached
}

double mmpmr_from_min_scores(const std::vector<double>& min_scores, double tau) {
    if (min_scores.empty()) throw DimensionError("mmpmr: empty score set");
    std::size_t hits = 0;
    for (double s : min_scores)
        if (s > tau) ++hits;
    return static_cast<double>(hits) / static_cast<double>(min_scores.size());
}

double mmpmr(const ScoreSet& scores, double tau) {
    if (scores.mated.empty()) throw DimensionError("mmpmr: empty score set");
    std::vector<double> mins;
    mins.reserve(scores.mated.size());
    for (const auto& per_morph : scores.mated) {
        if (per_morph.empty()) throw DimensionError("mmpmr: morph with no mated scores");
        mins.push_back(*std::min_element(per_morph.begin(), per_morph.end()));
    }
    return mmpmr_from_min_scores(mins, tau);
}

std::pair<double, double> apcer_bpcer(const std::vector<double>& attack_scores,
                                      const std::vector<double>& bonafide_scores,
                                      double decision_threshold) {
    if (attack_scores.empty() || bonafide_scores.empty())
        throw DimensionError("apcer_bpcer: empty inputs");
    std::size_t attack_as_bonafide = 0;
    for (double s : attack_scores)
        if (s < decision_threshold) ++attack_as_bonafide;
    std::size_t bonafide_as_attack = 0;
    for (double s : bonafide_scores)
        if (s >= decision_threshold) ++bonafide_as_attack;
    return {static_cast<double>(attack_as_bonafide) / static_cast<double>(attack_scores.size()),
            static_cast<double>(bonafide_as_attack) / static_cast<double>(bonafide_scores.size())};
}

std::vector<DetPoint> det_curve(const std::vector<double>& attack_scores,
                                const std::vector<double>& bonafide_scores) {
    if (attack_scores.empty() || bonafide_scores.empty())
        throw DimensionError("det_curve: empty inputs");

    std::vector<double> thresholds;
    thresholds.reserve(attack_scores.size() + bonafide_scores.size() + 1);
    thresholds.insert(thresholds.end(), attack_scores.begin(), attack_scores.end());
    thresholds.insert(thresholds.end(), bonafide_scores.begin(), bonafide_scores.end());
    std::sort(thresholds.begin(), thresholds.end());
    thresholds.erase(std::unique(thresholds.begin(), thresholds.end()), thresholds.end());
    // above-max extreme: everything classified bona fide -> (APCER 1, BPCER 0)
    thresholds.push_back(thresholds.back() + 1.0);

    std::vector<DetPoint> points;
    points.reserve(thresholds.size());
    for (auto it = thresholds.rbegin(); it != thresholds.rend(); ++it) {
        const auto [apcer, bpcer] = apcer_bpcer(attack_scores, bonafide_scores, *it);
        points.push_back({*it, apcer, bpcer});
    }
    return points;
}

BpcerAtApcer bpcer_at_apcer(const std::vector<double>& attack_scores,
                            const std::vector<double>& bonafide_scores, double apcer_target) {
    if (!(apcer_target > 0.0 && apcer_target < 1.0))
        throw ConfigError("bpcer_at_apcer: target must be in (0,1)");
    const std::vector<DetPoint> points = det_curve(attack_scores, bonafide_scores);
    // points are ordered by decreasing threshold; the first satisfying point
    // has the largest threshold and therefore the lowest BPCER
    for (const DetPoint& p : points) {
        if (p.apcer <= apcer_target) return {p.bpcer, p.threshold, true};
    }
    // every threshold violates the target (cannot happen with the observed-
    // score sweep, kept as a guarded fallback per the error contract)
    const DetPoint& extreme = points.back();
    return {extreme.bpcer, extreme.threshold, false};
}

}  // namespace morphkit::eval
