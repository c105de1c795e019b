#include "morphkit/eval/vulnerability.hpp"

#include <algorithm>
#include <map>

#include "morphkit/common/error.hpp"

namespace morphkit::eval {

VulnerabilityReport evaluate_vulnerability(
    const std::vector<MorphEntry>& morphs,
    const std::vector<std::pair<std::string, std::string>>& genuine_images,
    MatcherInterface& matcher, double far_target) {
    if (morphs.empty()) throw DimensionError("evaluate_vulnerability: no morphs");
    if (genuine_images.empty())
        throw DimensionError("evaluate_vulnerability: no genuine images for impostor pairs");

    VulnerabilityReport report;
    report.matcher_id = matcher.id();
    report.far_target = far_target;

    // embed each genuine image once, keyed by subject id
    std::map<std::string, std::vector<double>> genuine_emb;
    for (const auto& [subject, path] : genuine_images) {
        if (genuine_emb.count(subject)) continue;
        genuine_emb[subject] = matcher.embed_path(path);
    }

    // impostor scores: all unordered cross-subject pairs, index order
    std::vector<double> impostors;
    for (std::size_t i = 0; i < genuine_images.size(); ++i) {
        for (std::size_t j = i + 1; j < genuine_images.size(); ++j) {
            if (genuine_images[i].first == genuine_images[j].first) continue;
            impostors.push_back(cosine_similarity(genuine_emb[genuine_images[i].first],
                                                  genuine_emb[genuine_images[j].first]));
        }
    }
    report.tau = threshold_at_far(impostors, far_target);

    for (const MorphEntry& m : morphs) {
        try {
            if (m.parents.empty()) throw DimensionError("morph has no contributing subjects");
            const std::vector<double> morph_emb = matcher.embed_path(m.morph_path);
            double min_score = 0.0;
            bool first = true;
            for (const auto& [subject, path] : m.parents) {
                auto it = genuine_emb.find(subject);
                if (it == genuine_emb.end()) {
                    genuine_emb[subject] = matcher.embed_path(path);
                    it = genuine_emb.find(subject);
                }
                const double s = cosine_similarity(morph_emb, it->second);
                report.mated_scores.push_back({m.morph_id, subject, s});
                min_score = first ? s : std::min(min_score, s);
                first = false;
            }
            report.per_morph_min.emplace_back(m.morph_id, min_score);
            ++report.morphs_evaluated;
        } catch (const std::exception& e) {
            report.errors.push_back(m.morph_id + ": " + e.what());
            ++report.morphs_skipped;
        }
    }

    if (report.per_morph_min.empty())
        throw Error("evaluate_vulnerability: every morph failed; see itemized errors");

    // deterministic aggregation regardless of evaluation order
    std::sort(report.per_morph_min.begin(), report.per_morph_min.end());
    std::vector<double> mins;
    mins.reserve(report.per_morph_min.size());
    for (const auto& [id, s] : report.per_morph_min) mins.push_back(s);
    report.mmpmr_value = mmpmr_from_min_scores(mins, report.tau);
    return report;
}

}  // namespace morphkit::eval
