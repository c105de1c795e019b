#include "morphkit/pipeline/commands.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "morphkit/common/error.hpp"
#include "morphkit/eval/quality.hpp"
#include "morphkit/eval/vulnerability.hpp"
#include "morphkit/geometry/warp.hpp"
#include "morphkit/io/png_io.hpp"
#include "morphkit/pipeline/manifest.hpp"
#include "morphkit/pipeline/synth.hpp"

namespace morphkit::pipeline {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

class Timer {
public:
    Timer() : start_(std::chrono::steady_clock::now()) {}
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

private:
    std::chrono::steady_clock::time_point start_;
};

void ensure_dirs(const RunPaths& paths) {
    for (const auto& d : {paths.aligned_dir(), paths.supervisors_dir(), paths.baseline_dir(),
                          paths.checkpoints_dir(), paths.logs_dir(), paths.morphs_dir(),
                          paths.reports_dir()})
        fs::create_directories(d);
}

void fail_over_budget(const std::vector<std::string>& errors, std::size_t total,
                      const char* command) {
    if (errors.empty()) return;
    for (const auto& e : errors) std::fprintf(stderr, "%s: %s\n", command, e.c_str());
    if (errors.size() * 10 > total)
        throw Error(std::string(command) + ": " + std::to_string(errors.size()) + "/" +
                    std::to_string(total) + " pairs failed (over the 10% budget)");
}

std::vector<lmb::LandmarkPair> to_landmark_pairs(const std::vector<AlignedPair>& pairs) {
    std::vector<lmb::LandmarkPair> out;
    out.reserve(pairs.size());
    for (const auto& p : pairs) out.push_back({p.protocol.pair_id, p.lmk_a, p.lmk_b});
    return out;
}

std::vector<geom::LandmarkSet> landmark_pool(const std::vector<AlignedPair>& pairs) {
    std::map<std::string, geom::LandmarkSet> by_subject;
    for (const auto& p : pairs) {
        by_subject.emplace(p.subject_a, p.lmk_a);
        by_subject.emplace(p.subject_b, p.lmk_b);
    }
    std::vector<geom::LandmarkSet> pool;
    pool.reserve(by_subject.size());
    for (const auto& [id, lms] : by_subject) pool.push_back(lms);
    return pool;
}

geom::LandmarkSet blended_landmarks(const lmb::LandmarkBlender& blender, const AlignedPair& p) {
    return blender.blend(p.lmk_a, p.lmk_b);
}

gib::ImagePairSample make_sample(const AlignedPair& p, const geom::LandmarkSet& lm,
                                 double /*alpha*/) {
    const geom::TriangleMesh mesh = geom::build_face_mesh(lm);
    gib::ImagePairSample s;
    s.id = p.protocol.pair_id;
    s.img1 = p.img_a;
    s.img2 = p.img_b;
    s.l1 = p.lmk_a;
    s.l2 = p.lmk_b;
    s.lm = lm;
    s.sup1 = geom::piecewise_affine_warp(p.img_a, p.lmk_a, lm, mesh);
    s.sup2 = geom::piecewise_affine_warp(p.img_b, p.lmk_b, lm, mesh);
    return s;
}

void append_landmark_log(const std::string& path, const std::vector<lmb::LandmarkTrainLogRow>& rows) {
    const bool fresh = !fs::exists(path);
    std::ofstream out(path, std::ios::app);
    if (!out) throw IoError("cannot write " + path);
    if (fresh) out << "step,L_GD,L_GB,L_adv,total,D_loss\n";
    char buf[256];
    for (const auto& r : rows) {
        std::snprintf(buf, sizeof(buf), "%lld,%.10g,%.10g,%.10g,%.10g,%.10g\n",
                      static_cast<long long>(r.step), r.l_gd, r.l_gb, r.l_adv, r.total, r.d_loss);
        out << buf;
    }
}

void append_image_log(const std::string& path, const gib::ImageBlenderTrainer& trainer,
                      const std::vector<gib::ImageTrainLogRow>& rows) {
    const bool fresh = !fs::exists(path);
    std::ofstream out(path, std::ios::app);
    if (!out) throw IoError("cannot write " + path);
    if (fresh) {
        out << "# msssim_scales="
            << eval::ms_ssim_scale_count(trainer.config().resolution, trainer.config().resolution)
            << "\n";
        out << trainer.log_header() << "\n";
    }
    char buf[128];
    for (const auto& r : rows) {
        std::snprintf(buf, sizeof(buf), "%lld,%.10g,%.10g,%.10g,%.10g,%.10g",
                      static_cast<long long>(r.step), r.l_per, r.l_l1, r.l_msssim, r.l_adv,
                      r.total);
        out << buf;
        for (const auto& [name, v] : r.d_losses) {
            std::snprintf(buf, sizeof(buf), ",%.10g", v);
            out << buf;
        }
        out << "\n";
    }
}

}  // namespace

std::vector<AlignedPair> load_aligned_pairs(const RunConfig& cfg) {
    const RunPaths paths(cfg.run_dir);
    const auto protocol = load_protocol(cfg.protocol_path());
    std::vector<AlignedPair> out;
    std::vector<std::string> errors;
    for (const auto& pp : protocol) {
        try {
            AlignedPair ap;
            ap.protocol = pp;
            ap.subject_a = subject_id_of(pp.img_a);
            ap.subject_b = subject_id_of(pp.img_b);
            ap.img_a = io::load_png(paths.aligned_image(ap.subject_a));
            ap.img_b = io::load_png(paths.aligned_image(ap.subject_b));
            ap.lmk_a = geom::load_landmarks(paths.aligned_landmarks(ap.subject_a),
                                            cfg.landmark_blender.landmark_count);
            ap.lmk_b = geom::load_landmarks(paths.aligned_landmarks(ap.subject_b),
                                            cfg.landmark_blender.landmark_count);
            out.push_back(std::move(ap));
        } catch (const std::exception& e) {
            errors.push_back(pp.pair_id + ": " + e.what());
        }
    }
    fail_over_budget(errors, protocol.size(), "load_aligned_pairs");
    if (out.empty()) throw Error("no aligned pairs available; run `prepare` first");
    return out;
}

void cmd_synth(const RunConfig& cfg) {
    const Timer timer;
    generate_synthetic_dataset(cfg.seed, cfg.synth.count, cfg.synth.resolution, cfg.data_dir);

    ManifestLock lock(cfg.run_dir);
    RunManifest manifest = RunManifest::load_or_create(cfg.run_dir, config_hash(cfg));
    for (const auto& entry : fs::directory_iterator(cfg.data_dir)) {
        if (entry.is_regular_file()) manifest.record_input(entry.path().string());
    }
    manifest.timings_sec["synth"] = timer.seconds();
    manifest.save(cfg.run_dir);
}

void cmd_prepare(const RunConfig& cfg) {
    const Timer timer;
    ManifestLock lock(cfg.run_dir);
    const RunPaths paths(cfg.run_dir);
    ensure_dirs(paths);
    RunManifest manifest = RunManifest::load_or_create(cfg.run_dir, config_hash(cfg));

    const auto protocol = load_protocol(cfg.protocol_path());
    manifest.record_input(cfg.protocol_path());

    // referenced files must exist at run start
    std::set<std::string> missing;
    for (const auto& pp : protocol)
        for (const auto& f : {pp.img_a, pp.img_b, pp.lmk_a, pp.lmk_b})
            if (!fs::exists(f)) missing.insert(f);

    std::vector<std::string> errors;
    std::map<std::string, bool> aligned_ok;

    auto align_subject = [&](const std::string& img_path, const std::string& lmk_path) {
        const std::string subject = subject_id_of(img_path);
        if (aligned_ok.count(subject)) return;
        const geom::FaceImage img = io::load_png(img_path);
        const geom::LandmarkSet lms =
            geom::load_landmarks(lmk_path, cfg.landmark_blender.landmark_count);
        const auto [crop, crop_lms] = geom::align_face(img, lms, cfg.alignment);
        io::save_png(crop, paths.aligned_image(subject));
        geom::save_landmarks(crop_lms, paths.aligned_landmarks(subject), cfg.alignment.output_size,
                             cfg.alignment.output_size);
        manifest.record_input(img_path);
        manifest.record_input(lmk_path);
        manifest.record_artifact(paths.aligned_image(subject));
        manifest.record_artifact(paths.aligned_landmarks(subject));
        aligned_ok[subject] = true;
    };

    for (const auto& pp : protocol) {
        try {
            for (const auto& f : {pp.img_a, pp.img_b, pp.lmk_a, pp.lmk_b})
                if (missing.count(f)) throw IoError("missing input file: " + f);
            align_subject(pp.img_a, pp.lmk_a);
            align_subject(pp.img_b, pp.lmk_b);

            const std::string sa = subject_id_of(pp.img_a);
            const std::string sb = subject_id_of(pp.img_b);
            const geom::FaceImage ia = io::load_png(paths.aligned_image(sa));
            const geom::FaceImage ib = io::load_png(paths.aligned_image(sb));
            const geom::LandmarkSet la = geom::load_landmarks(paths.aligned_landmarks(sa));
            const geom::LandmarkSet lb = geom::load_landmarks(paths.aligned_landmarks(sb));

            // averaged-landmark target: baseline morph plus initial (pre-LBM)
            // supervisors; train-blender rebuilds these on the learned L_m
            const geom::LandmarkSet l_avg = geom::average_landmarks(la, lb);
            const geom::TriangleMesh mesh = geom::build_face_mesh(l_avg);
            const geom::FaceImage sup_a = geom::piecewise_affine_warp(ia, la, l_avg, mesh);
            const geom::FaceImage sup_b = geom::piecewise_affine_warp(ib, lb, l_avg, mesh);
            const geom::FaceImage iop = geom::alpha_blend(sup_a, sup_b, cfg.alpha);
            const geom::FaceImage baseline = iop;  // averaged landmarks + alpha blend

            const std::string base = paths.supervisors_dir() + "/" + pp.pair_id;
            io::save_png(sup_a, base + "_a.png");
            io::save_png(sup_b, base + "_b.png");
            io::save_png(iop, base + "_iop.png");
            io::save_png(baseline, paths.baseline_dir() + "/" + pp.pair_id + "_baseline.png");
            for (const auto& f : {base + "_a.png", base + "_b.png", base + "_iop.png",
                                  paths.baseline_dir() + "/" + pp.pair_id + "_baseline.png"})
                manifest.record_artifact(f);
        } catch (const std::exception& e) {
            errors.push_back(pp.pair_id + ": " + e.what());
        }
    }
    fail_over_budget(errors, protocol.size(), "prepare");

    manifest.timings_sec["prepare"] = timer.seconds();
    manifest.save(cfg.run_dir);
}

void cmd_train_landmarks(const RunConfig& cfg, bool resume) {
    const Timer timer;
    ManifestLock lock(cfg.run_dir);
    const RunPaths paths(cfg.run_dir);
    ensure_dirs(paths);
    RunManifest manifest = RunManifest::load_or_create(cfg.run_dir, config_hash(cfg));

    const auto pairs = load_aligned_pairs(cfg);
    const auto dataset = to_landmark_pairs(pairs);
    const auto pool = landmark_pool(pairs);

    std::unique_ptr<lmb::LandmarkBlenderTrainer> trainer;
    if (resume && fs::exists(paths.landmark_checkpoint()))
        trainer = lmb::LandmarkBlenderTrainer::from_checkpoint(paths.landmark_checkpoint());
    else
        trainer = std::make_unique<lmb::LandmarkBlenderTrainer>(cfg.landmark_blender);

    try {
        const auto log = trainer->train(dataset, pool, cfg.landmark_blender.steps);
        append_landmark_log(paths.landmark_log(), log);
    } catch (const DivergenceError&) {
        trainer->save_checkpoint(paths.landmark_checkpoint());  // last finite state
        throw;
    }

    trainer->save_checkpoint(paths.landmark_checkpoint());
    manifest.record_artifact(paths.landmark_checkpoint());
    manifest.record_artifact(paths.landmark_log());
    manifest.timings_sec["train-landmarks"] = timer.seconds();
    manifest.save(cfg.run_dir);
}

void cmd_train_blender(const RunConfig& cfg, bool resume) {
    const Timer timer;
    ManifestLock lock(cfg.run_dir);
    const RunPaths paths(cfg.run_dir);
    ensure_dirs(paths);
    RunManifest manifest = RunManifest::load_or_create(cfg.run_dir, config_hash(cfg));

    if (!fs::exists(paths.landmark_checkpoint()))
        throw Error("train-blender requires the landmark checkpoint; run train-landmarks first");
    const auto lm_trainer = lmb::LandmarkBlenderTrainer::from_checkpoint(paths.landmark_checkpoint());

    const auto pairs = load_aligned_pairs(cfg);
    std::vector<gib::ImagePairSample> samples;
    samples.reserve(pairs.size());
    for (const auto& p : pairs) {
        const geom::LandmarkSet lm = blended_landmarks(lm_trainer->blender(), p);
        samples.push_back(make_sample(p, lm, cfg.alpha));

        // refresh the per-pair supervisors with the learned L_m
        const std::string base = paths.supervisors_dir() + "/" + p.protocol.pair_id;
        geom::save_landmarks(lm, base + "_lm.lmk", cfg.alignment.output_size,
                             cfg.alignment.output_size);
        io::save_png(samples.back().sup1, base + "_a.png");
        io::save_png(samples.back().sup2, base + "_b.png");
        io::save_png(geom::alpha_blend(samples.back().sup1, samples.back().sup2, cfg.alpha),
                     base + "_iop.png");
        for (const auto& suffix : {"_lm.lmk", "_a.png", "_b.png", "_iop.png"})
            manifest.record_artifact(base + suffix);
    }

    std::unique_ptr<gib::ImageBlenderTrainer> trainer;
    if (resume && fs::exists(paths.image_checkpoint()))
        trainer = gib::ImageBlenderTrainer::from_checkpoint(paths.image_checkpoint());
    else
        trainer = std::make_unique<gib::ImageBlenderTrainer>(cfg.image_blender);

    try {
        const auto log = trainer->train(samples, cfg.image_blender.steps);
        append_image_log(paths.image_log(), *trainer, log);
    } catch (const DivergenceError&) {
        trainer->save_checkpoint(paths.image_checkpoint());
        throw;
    }

    trainer->save_checkpoint(paths.image_checkpoint());
    manifest.record_artifact(paths.image_checkpoint());
    manifest.record_artifact(paths.image_log());
    manifest.timings_sec["train-blender"] = timer.seconds();
    manifest.save(cfg.run_dir);
}

void cmd_generate(const RunConfig& cfg) {
    const Timer timer;
    ManifestLock lock(cfg.run_dir);
    const RunPaths paths(cfg.run_dir);
    ensure_dirs(paths);
    RunManifest manifest = RunManifest::load_or_create(cfg.run_dir, config_hash(cfg));

    if (!fs::exists(paths.landmark_checkpoint()) || !fs::exists(paths.image_checkpoint()))
        throw Error("generate requires both checkpoints; run the training commands first");
    const auto lm_trainer = lmb::LandmarkBlenderTrainer::from_checkpoint(paths.landmark_checkpoint());
    const auto ib_trainer = gib::ImageBlenderTrainer::from_checkpoint(paths.image_checkpoint());
    const gib::Generator& gen = ib_trainer->generator();

    const auto pairs = load_aligned_pairs(cfg);
    std::vector<std::string> errors(pairs.size());
    std::vector<std::vector<std::string>> artifacts(pairs.size());

    auto run_pair = [&](std::size_t i) {
        const AlignedPair& p = pairs[i];
        try {
            const geom::LandmarkSet lm = blended_landmarks(lm_trainer->blender(), p);
            const geom::FaceImage m1 = gen.generate_intermediate(p.img_a, p.lmk_a, lm);
            const geom::FaceImage m2 = gen.generate_intermediate(p.img_b, p.lmk_b, lm);
            const geom::FaceImage morph = gib::final_morph(m1, m2, cfg.alpha);
            if (!morph.is_valid()) throw Error("generated morph violates image invariants");

            const geom::LandmarkSet l_avg = geom::average_landmarks(p.lmk_a, p.lmk_b);
            const geom::FaceImage baseline =
                geom::classical_morph(p.img_a, p.img_b, p.lmk_a, p.lmk_b, l_avg, cfg.alpha);
            if (!baseline.is_valid()) throw Error("baseline morph violates image invariants");

            const std::string morph_path = paths.morph_image(p.subject_a, p.subject_b);
            const std::string base_path = paths.baseline_morph(p.subject_a, p.subject_b);
            io::save_png(morph, morph_path);
            io::save_png(baseline, base_path);
            artifacts[i] = {morph_path, base_path};
        } catch (const std::exception& e) {
            errors[i] = p.protocol.pair_id + ": " + e.what();
        }
    };

    const int workers = std::max(1, cfg.workers);
    if (workers == 1) {
        for (std::size_t i = 0; i < pairs.size(); ++i) run_pair(i);
    } else {
        std::vector<std::thread> threads;
        std::atomic<std::size_t> next{0};
        for (int w = 0; w < workers; ++w) {
            threads.emplace_back([&]() {
                for (std::size_t i = next.fetch_add(1); i < pairs.size(); i = next.fetch_add(1))
                    run_pair(i);
            });
        }
        for (auto& t : threads) t.join();
    }

    std::vector<std::string> real_errors;
    for (const auto& e : errors)
        if (!e.empty()) real_errors.push_back(e);
    fail_over_budget(real_errors, pairs.size(), "generate");

    // deterministic manifest regardless of completion order
    for (const auto& a : artifacts)
        for (const auto& f : a) manifest.record_artifact(f);
    manifest.timings_sec["generate"] = timer.seconds();
    manifest.save(cfg.run_dir);
}

namespace {

struct DetectorScores {
    std::vector<double> attack;
    std::vector<double> bonafide;
};

DetectorScores load_detector_scores(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("detector scores: cannot open " + path);
    std::string line;
    if (!std::getline(in, line) || line != "sample_id,label,score")
        throw ParseError(path + ":1: expected header \"sample_id,label,score\"");
    DetectorScores out;
    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string id, label, score_s;
        if (!std::getline(ss, id, ',') || !std::getline(ss, label, ',') ||
            !std::getline(ss, score_s))
            throw ParseError(path + ":" + std::to_string(line_no) + ": expected 3 fields");
        const double score = std::stod(score_s);
        if (label == "attack")
            out.attack.push_back(score);
        else if (label == "bonafide")
            out.bonafide.push_back(score);
        else
            throw ParseError(path + ":" + std::to_string(line_no) +
                             ": label must be attack or bonafide");
    }
    return out;
}

void write_vulnerability_reports(const RunPaths& paths, const std::string& stem,
                                 const eval::VulnerabilityReport& report) {
    json j;
    j["matcher"] = report.matcher_id;
    j["far_target"] = report.far_target;
    j["tau"] = report.tau;
    j["mmpmr"] = report.mmpmr_value;
    j["morphs_evaluated"] = report.morphs_evaluated;
    j["morphs_skipped"] = report.morphs_skipped;
    j["errors"] = report.errors;
    json mins = json::object();
    for (const auto& [id, s] : report.per_morph_min) mins[id] = s;
    j["per_morph_min_score"] = mins;
    std::ofstream jf(paths.reports_dir() + "/" + stem + ".json");
    jf << j.dump(2) << "\n";

    std::ofstream cf(paths.reports_dir() + "/" + stem + ".csv");
    cf << "morph_id,min_score,attack_success\n";
    char buf[160];
    for (const auto& [id, s] : report.per_morph_min) {
        std::snprintf(buf, sizeof(buf), "%s,%.10g,%d\n", id.c_str(), s, s > report.tau ? 1 : 0);
        cf << buf;
    }
}

void write_scores_csv(const std::string& path, const eval::VulnerabilityReport& report) {
    std::ofstream out(path);
    out << "morph_id,subject_id,score\n";
    char buf[160];
    for (const auto& s : report.mated_scores) {
        std::snprintf(buf, sizeof(buf), "%s,%s,%.10g\n", s.morph_id.c_str(), s.subject_id.c_str(),
                      s.score);
        out << buf;
    }
}

void write_quality_reports(const RunPaths& paths, const std::string& stem,
                           const eval::QualityReport& q) {
    json j;
    j["psnr_mean"] = q.psnr_mean;
    j["psnr_ci95"] = q.psnr_ci95;
    j["ssim_mean"] = q.ssim_mean;
    j["ssim_ci95"] = q.ssim_ci95;
    j["ms_ssim_scales"] = q.ms_ssim_scales;
    json entries = json::array();
    for (const auto& e : q.entries) {
        json je;
        je["morph_id"] = e.morph_id;
        je["psnr"] = e.psnr_avg;
        je["ssim"] = e.ssim_avg;
        entries.push_back(je);
    }
    j["entries"] = entries;
    std::ofstream jf(paths.reports_dir() + "/" + stem + ".json");
    jf << j.dump(2) << "\n";

    std::ofstream cf(paths.reports_dir() + "/" + stem + ".csv");
    cf << "morph_id,psnr,ssim\n";
    char buf[160];
    for (const auto& e : q.entries) {
        std::snprintf(buf, sizeof(buf), "%s,%.10g,%.10g\n", e.morph_id.c_str(), e.psnr_avg,
                      e.ssim_avg);
        cf << buf;
    }
}

}  // namespace

void cmd_evaluate(const RunConfig& cfg, const std::string& detector_scores_csv) {
    const Timer timer;
    ManifestLock lock(cfg.run_dir);
    const RunPaths paths(cfg.run_dir);
    ensure_dirs(paths);
    RunManifest manifest = RunManifest::load_or_create(cfg.run_dir, config_hash(cfg));

    const auto pairs = load_aligned_pairs(cfg);

    std::unique_ptr<eval::MatcherInterface> matcher;
    if (cfg.matcher.type == "toy")
        matcher = eval::toy_matcher(cfg.matcher.seed);
    else
        matcher = eval::external_matcher(cfg.matcher.command);

    // morphs must exist; list everything missing up front
    std::vector<std::string> missing;
    for (const auto& p : pairs) {
        if (!fs::exists(paths.morph_image(p.subject_a, p.subject_b)))
            missing.push_back(paths.morph_image(p.subject_a, p.subject_b));
    }
    if (!missing.empty()) {
        std::string msg = "evaluate: missing morph artifacts (run `generate` first):";
        for (const auto& m : missing) msg += "\n  " + m;
        throw Error(msg);
    }

    std::vector<std::pair<std::string, std::string>> genuine;
    std::set<std::string> seen;
    for (const auto& p : pairs) {
        if (seen.insert(p.subject_a).second)
            genuine.emplace_back(p.subject_a, paths.aligned_image(p.subject_a));
        if (seen.insert(p.subject_b).second)
            genuine.emplace_back(p.subject_b, paths.aligned_image(p.subject_b));
    }
    std::sort(genuine.begin(), genuine.end());

    auto entries_for = [&](bool baseline) {
        std::vector<eval::MorphEntry> entries;
        for (const auto& p : pairs) {
            eval::MorphEntry e;
            e.morph_id = p.protocol.pair_id;
            e.morph_path = baseline ? paths.baseline_morph(p.subject_a, p.subject_b)
                                    : paths.morph_image(p.subject_a, p.subject_b);
            e.parents = {{p.subject_a, paths.aligned_image(p.subject_a)},
                         {p.subject_b, paths.aligned_image(p.subject_b)}};
            entries.push_back(std::move(e));
        }
        return entries;
    };

    const auto report =
        eval::evaluate_vulnerability(entries_for(false), genuine, *matcher, cfg.far_target);
    write_vulnerability_reports(paths, "vulnerability", report);
    write_scores_csv(paths.reports_dir() + "/scores.csv", report);

    std::vector<eval::QualityEntry> q_entries;
    for (const auto& p : pairs) {
        const geom::FaceImage morph = io::load_png(paths.morph_image(p.subject_a, p.subject_b));
        q_entries.push_back(eval::morph_quality(morph, p.img_a, p.img_b, p.protocol.pair_id));
    }
    write_quality_reports(paths, "quality",
                          eval::summarize_quality(std::move(q_entries), cfg.alignment.output_size));

    // baseline morphs get the same treatment when present
    bool have_baselines = true;
    for (const auto& p : pairs)
        have_baselines = have_baselines && fs::exists(paths.baseline_morph(p.subject_a, p.subject_b));
    if (have_baselines) {
        const auto base_report =
            eval::evaluate_vulnerability(entries_for(true), genuine, *matcher, cfg.far_target);
        write_vulnerability_reports(paths, "vulnerability_baseline", base_report);
        write_scores_csv(paths.reports_dir() + "/scores_baseline.csv", base_report);
        std::vector<eval::QualityEntry> bq;
        for (const auto& p : pairs) {
            const geom::FaceImage morph =
                io::load_png(paths.baseline_morph(p.subject_a, p.subject_b));
            bq.push_back(eval::morph_quality(morph, p.img_a, p.img_b, p.protocol.pair_id));
        }
        write_quality_reports(paths, "quality_baseline",
                              eval::summarize_quality(std::move(bq), cfg.alignment.output_size));
    }

    // MAD detector scores are external (HOG+SVM / MixfaceNet are out of
    // scope); when supplied, emit the DET sweep and operating points
    if (!detector_scores_csv.empty()) {
        const DetectorScores ds = load_detector_scores(detector_scores_csv);
        const auto det = eval::det_curve(ds.attack, ds.bonafide);
        std::ofstream out(paths.reports_dir() + "/det.csv");
        out << "threshold,apcer,bpcer\n";
        char buf[128];
        for (const auto& pt : det) {
            std::snprintf(buf, sizeof(buf), "%.10g,%.10g,%.10g\n", pt.threshold, pt.apcer,
                          pt.bpcer);
            out << buf;
        }
        json dj;
        for (double target : {0.05, 0.10}) {
            const auto op = eval::bpcer_at_apcer(ds.attack, ds.bonafide, target);
            char key[32];
            std::snprintf(key, sizeof(key), "bpcer_at_apcer_%g", target);
            dj[key] = {{"bpcer", op.bpcer}, {"threshold", op.threshold}, {"reachable", op.reachable}};
        }
        std::ofstream jf(paths.reports_dir() + "/detector_report.json");
        jf << dj.dump(2) << "\n";
        manifest.record_artifact(paths.reports_dir() + "/det.csv");
    }

    for (const auto& stem : {"vulnerability.json", "vulnerability.csv", "scores.csv",
                             "quality.json", "quality.csv"})
        manifest.record_artifact(paths.reports_dir() + "/" + std::string(stem));
    manifest.timings_sec["evaluate"] = timer.seconds();
    manifest.save(cfg.run_dir);
}

}  // namespace morphkit::pipeline
