#pragma once

#include <string>
#include <vector>

namespace morphkit::eval {

/// Mated/impostor/genuine similarity scores feeding the vulnerability
/// metrics. `mated[m]` holds S_m^n for every contributing subject n of
/// morph m (N_m >= 1).
struct ScoreSet {
    std::vector<std::vector<double>> mated;
    std::vector<double> impostor;
    std::vector<double> genuine;
};

/// Smallest observed score tau such that the fraction of impostor scores
/// strictly above tau is <= far_target. Deterministic: candidates are the
/// sorted scores themselves.
double threshold_at_far(std::vector<double> impostor_scores, double far_target);

/// Mated Morph Presentation Match Rate: fraction of morphs whose *minimum*
/// mated score strictly exceeds tau.
double mmpmr(const ScoreSet& scores, double tau);
double mmpmr_from_min_scores(const std::vector<double>& min_scores, double tau);

/// Detector convention: higher score = more attack-like. APCER counts attack
/// samples classified bona fide (score < threshold); BPCER counts bona fide
/// samples classified attack (score >= threshold).
std::pair<double, double> apcer_bpcer(const std::vector<double>& attack_scores,
                                      const std::vector<double>& bonafide_scores,
                                      double decision_threshold);

struct DetPoint {
    double threshold;
    double apcer;
    double bpcer;
};

/// One point per candidate threshold (every observed score plus an
/// above-max extreme), ordered by decreasing threshold so APCER is
/// non-increasing along the list.
std::vector<DetPoint> det_curve(const std::vector<double>& attack_scores,
                                const std::vector<double>& bonafide_scores);

struct BpcerAtApcer {
    double bpcer = 1.0;
    double threshold = 0.0;
    bool reachable = true;  // false -> extreme-threshold fallback was used
};

/// Operating point on the DET sweep: the lowest BPCER whose APCER is within
/// the target (equivalently, the largest threshold with APCER <= target).
BpcerAtApcer bpcer_at_apcer(const std::vector<double>& attack_scores,
                            const std::vector<double>& bonafide_scores, double apcer_target);

}  // namespace morphkit::eval
