#pragma once

#include <string>
#include <vector>

#include "morphkit/eval/matcher.hpp"
#include "morphkit/eval/metrics.hpp"

namespace morphkit::eval {

/// One morph plus its contributing subjects' genuine images.
struct MorphEntry {
    std::string morph_id;
    std::string morph_path;
    // (subject id, genuine image path) for every contributing subject
    std::vector<std::pair<std::string, std::string>> parents;
};

struct MatedScore {
    std::string morph_id;
    std::string subject_id;
    double score = 0.0;
};

struct VulnerabilityReport {
    std::string matcher_id;
    double far_target = 0.0;
    double tau = 0.0;
    double mmpmr_value = 0.0;
    std::vector<MatedScore> mated_scores;                       // every S_m^n
    std::vector<std::pair<std::string, double>> per_morph_min;  // morph id -> min_n S_m^n
    std::vector<std::string> errors;                            // itemized per-morph failures
    int morphs_evaluated = 0;
    int morphs_skipped = 0;
};

/// Full vulnerability pipeline: tau from threshold_at_far over the impostor scores
/// (all cross-subject genuine pairs), per-morph minimum mated score, MMPMR.
/// Failing morphs are itemized and skipped rather than failing the run.
VulnerabilityReport evaluate_vulnerability(
    const std::vector<MorphEntry>& morphs,
    const std::vector<std::pair<std::string, std::string>>& genuine_images,  // (subject, path)
    MatcherInterface& matcher, double far_target);

}  // namespace morphkit::eval
