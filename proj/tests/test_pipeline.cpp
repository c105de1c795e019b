#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "morphkit/common/error.hpp"

#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "morphkit/common/sha256.hpp"
#include "morphkit/eval/metrics.hpp"
#include "morphkit/eval/quality.hpp"
#include "morphkit/io/png_io.hpp"
#include "morphkit/pipeline/commands.hpp"
#include "morphkit/pipeline/manifest.hpp"
#include "morphkit/pipeline/synth.hpp"
#include "test_util.hpp"

#include <json.hpp>

using namespace morphkit;
using namespace morphkit::pipeline;
namespace fs = std::filesystem;

namespace {

RunConfig tiny_run_config(const std::string& root) {
    const std::string json = R"({
        "seed": 77,
        "run_dir": ")" + root + R"(/run",
        "data_dir": ")" + root + R"(/data",
        "alignment": {"output_size": 32},
        "synth": {"count": 8, "resolution": 32},
        "landmark_blender": {"steps": 12, "batch_size": 4},
        "image_blender": {"steps": 2, "iterations": 1, "appearance_channels": 4,
                           "shape_channels": 4, "gcn_hidden": 6, "disc_channels": 4}
    })";
    return run_config_from_json(json);
}

std::map<std::string, std::string> digest_dir(const std::string& dir) {
    std::map<std::string, std::string> out;
    for (const auto& e : fs::recursive_directory_iterator(dir)) {
        if (!e.is_regular_file()) continue;
        const std::string rel = fs::relative(e.path(), dir).string();
        if (rel == "manifest.json" || rel == ".morphkit.lock") continue;
        out[rel] = Sha256::of_file(e.path().string());
    }
    return out;
}

void run_full_pipeline(const RunConfig& cfg) {
    cmd_synth(cfg);
    cmd_prepare(cfg);
    cmd_train_landmarks(cfg);
    cmd_train_blender(cfg);
    cmd_generate(cfg);
    cmd_evaluate(cfg);
}

}  // namespace

TEST_CASE("synthetic dataset: determinism, bounds, landmark round trip") {
    testutil::TempDir tmp("synth");

    SUBCASE("same seed reproduces bit-identical files") {
        generate_synthetic_dataset(123, 4, 64, tmp / "a");
        generate_synthetic_dataset(123, 4, 64, tmp / "b");
        const auto da = digest_dir(tmp / "a");
        const auto db = digest_dir(tmp / "b");
        REQUIRE(da.size() == db.size());
        for (const auto& [rel, hash] : da) {
            if (rel == "pairs.csv") continue;  // embeds the output dir path
            CHECK(db.at(rel) == hash);
        }
    }
    SUBCASE("different seeds differ") {
        generate_synthetic_dataset(123, 2, 64, tmp / "c");
        generate_synthetic_dataset(124, 2, 64, tmp / "d");
        CHECK(digest_dir(tmp / "c").at("subj000.png") != digest_dir(tmp / "d").at("subj000.png"));
    }
    SUBCASE("landmarks stay inside the image and reload losslessly") {
        generate_synthetic_dataset(9, 3, 64, tmp / "e");
        for (int i = 0; i < 3; ++i) {
            const std::string path = (tmp / "e") + ("/subj00" + std::to_string(i) + ".lmk");
            const geom::LandmarkSet l = geom::load_landmarks(path, kSynthLandmarkCount);
            for (int j = 0; j < l.count(); ++j) {
                CHECK(l.point(j).x >= 0.0);
                CHECK(l.point(j).x <= 1.0);
                CHECK(l.point(j).y >= 0.0);
                CHECK(l.point(j).y <= 1.0);
            }
            // save -> load round trip preserves every bit at power-of-two dims
            geom::save_landmarks(l, tmp / "rt.lmk", 64, 64);
            CHECK(geom::load_landmarks(tmp / "rt.lmk") == l);
        }
    }
    SUBCASE("faces of distinct identities differ in appearance") {
        const SyntheticFace f0 = make_synthetic_face(5, 0, 64);
        const SyntheticFace f1 = make_synthetic_face(5, 1, 64);
        CHECK(geom::max_abs_diff(f0.image, f1.image) > 0.05);
    }
}

TEST_CASE("run config: round trip, unknown keys, validation") {
    SUBCASE("load -> serialize -> load is idempotent") {
        testutil::TempDir tmp("cfg");
        const RunConfig cfg = tiny_run_config(tmp.str());
        const std::string once = run_config_to_json(cfg);
        const std::string twice = run_config_to_json(run_config_from_json(once));
        CHECK(once == twice);
    }
    SUBCASE("unknown top-level key is rejected by name") {
        CHECK_THROWS_WITH_AS(run_config_from_json(R"({"sed": 1})"), doctest::Contains("sed"),
                             ConfigError);
    }
    SUBCASE("unknown nested key is rejected") {
        CHECK_THROWS_WITH_AS(run_config_from_json(R"({"matcher": {"comand": "x"}})"),
                             doctest::Contains("comand"), ConfigError);
    }
    SUBCASE("invalid values are rejected") {
        CHECK_THROWS_AS(run_config_from_json(R"({"far_target": 1.5})"), ConfigError);
        CHECK_THROWS_AS(run_config_from_json(R"({"alpha": -0.1})"), ConfigError);
        CHECK_THROWS_AS(run_config_from_json(R"({"matcher": {"type": "external"}})"), ConfigError);
    }
    SUBCASE("config hash is stable and seed-sensitive") {
        testutil::TempDir tmp("cfg2");
        RunConfig cfg = tiny_run_config(tmp.str());
        const std::string h1 = config_hash(cfg);
        CHECK(h1 == config_hash(cfg));
        cfg.seed = 78;
        cfg.propagate();
        CHECK(h1 != config_hash(cfg));
    }
}

TEST_CASE("protocol csv loading") {
    testutil::TempDir tmp("proto");
    SUBCASE("round trip") {
        const std::vector<ProtocolPair> pairs{{"p0", "a.png", "b.png", "a.lmk", "b.lmk"},
                                              {"p1", "c.png", "d.png", "c.lmk", "d.lmk"}};
        save_protocol(pairs, tmp / "pairs.csv");
        const auto back = load_protocol(tmp / "pairs.csv");
        REQUIRE(back.size() == 2);
        CHECK(back[1].img_b == "d.png");
    }
    SUBCASE("duplicate ids rejected") {
        std::ofstream out(tmp / "dup.csv");
        out << "pair_id,img_a,img_b,lmk_a,lmk_b\np0,a,b,c,d\np0,e,f,g,h\n";
        out.close();
        CHECK_THROWS_WITH_AS(load_protocol(tmp / "dup.csv"), doctest::Contains("duplicate"),
                             ParseError);
    }
    SUBCASE("bad header rejected") {
        std::ofstream out(tmp / "bad.csv");
        out << "id,a,b\n";
        out.close();
        CHECK_THROWS_AS(load_protocol(tmp / "bad.csv"), ParseError);
    }
}

TEST_CASE("prepare: artifacts, determinism, failure budget") {
    testutil::TempDir tmp("prep");
    RunConfig cfg = tiny_run_config(tmp.str());
    cmd_synth(cfg);

    SUBCASE("supervisor and baseline images land on disk, one set per pair") {
        cmd_prepare(cfg);
        int iops = 0;
        for (const auto& e : fs::directory_iterator(tmp / "run/supervisors"))
            if (e.path().string().find("_iop.png") != std::string::npos) ++iops;
        CHECK(iops == 4);  // 8 subjects -> 4 pairs
        int baselines = 0;
        for (const auto& e : fs::directory_iterator(tmp / "run/baseline")) {
            (void)e;
            ++baselines;
        }
        CHECK(baselines == 4);
    }
    SUBCASE("rerunning prepare reproduces identical artifact digests") {
        cmd_prepare(cfg);
        const auto first = digest_dir(tmp / "run");
        cmd_prepare(cfg);
        const auto second = digest_dir(tmp / "run");
        REQUIRE(first.size() == second.size());
        for (const auto& [rel, hash] : first) CHECK(second.at(rel) == hash);
    }
    SUBCASE("a missing landmark file flags that pair and processes the rest") {
        // 12 pairs so one failure stays under the 10% budget
        RunConfig big = tiny_run_config(tmp.str());
        big.synth.count = 24;
        big.run_dir = tmp / "run_big";
        big.data_dir = tmp / "data_big";
        cmd_synth(big);
        fs::remove(big.data_dir + "/subj005.lmk");
        cmd_prepare(big);  // pair02 fails, everything else succeeds
        CHECK_FALSE(fs::exists(big.run_dir + "/supervisors/pair02_iop.png"));
        CHECK(fs::exists(big.run_dir + "/supervisors/pair03_iop.png"));
        int iops = 0;
        for (const auto& e : fs::directory_iterator(big.run_dir + "/supervisors"))
            if (e.path().string().find("_iop.png") != std::string::npos) ++iops;
        CHECK(iops == 11);
    }
    SUBCASE("over-budget failures abort the command") {
        RunConfig broken = tiny_run_config(tmp.str());
        broken.run_dir = tmp / "run_broken";
        broken.data_dir = tmp / "data_broken";
        cmd_synth(broken);
        fs::remove(broken.data_dir + "/subj001.lmk");  // 1 of 4 pairs > 10%
        CHECK_THROWS_WITH_AS(cmd_prepare(broken), doctest::Contains("budget"), Error);
    }
}

TEST_CASE("training commands: logs, checkpoints, resume") {
    testutil::TempDir tmp("traincmd");
    RunConfig cfg = tiny_run_config(tmp.str());
    cmd_synth(cfg);
    cmd_prepare(cfg);

    SUBCASE("smoke config writes checkpoints and logs with one row per step") {
        cmd_train_landmarks(cfg);
        cmd_train_blender(cfg);
        CHECK(fs::exists(tmp / "run/checkpoints/landmark_blender.lmb"));
        CHECK(fs::exists(tmp / "run/checkpoints/image_blender.gib"));

        std::ifstream lm_log(tmp / "run/logs/landmark_training.csv");
        std::string line;
        int rows = -1;  // header
        while (std::getline(lm_log, line))
            if (!line.empty()) ++rows;
        CHECK(rows == cfg.landmark_blender.steps);

        std::ifstream ib_log(tmp / "run/logs/image_training.csv");
        rows = -2;  // comment + header
        std::string header;
        int line_idx = 0;
        while (std::getline(ib_log, line)) {
            if (line_idx == 0) CHECK(line == "# msssim_scales=2");
            if (line_idx == 1) header = line;
            if (!line.empty()) ++rows;
            ++line_idx;
        }
        CHECK(rows == cfg.image_blender.steps);
        CHECK(header == "step,L_per,L_l1,L_msssim,L_adv,total,D_lm,D_app");
    }
    SUBCASE("resume continues the step counter and appends log rows") {
        cmd_train_landmarks(cfg);
        cmd_train_landmarks(cfg, /*resume=*/true);
        const auto t = lmb::LandmarkBlenderTrainer::from_checkpoint(
            tmp / "run/checkpoints/landmark_blender.lmb");
        CHECK(t->step_counter() == 2 * cfg.landmark_blender.steps);

        std::ifstream log(tmp / "run/logs/landmark_training.csv");
        std::string line;
        int rows = -1;
        std::string last;
        while (std::getline(log, line))
            if (!line.empty()) {
                ++rows;
                last = line;
            }
        CHECK(rows == 2 * cfg.landmark_blender.steps);
        CHECK(last.substr(0, 3) == "24,");
    }
}

TEST_CASE("generate and evaluate: counts, invariants, report consistency") {
    testutil::TempDir tmp("geneval");
    RunConfig cfg = tiny_run_config(tmp.str());
    run_full_pipeline(cfg);
    const RunPaths paths(cfg.run_dir);

    SUBCASE("morph counts and image invariants") {
        int proposed = 0, baseline = 0;
        for (const auto& e : fs::directory_iterator(paths.morphs_dir())) {
            const std::string name = e.path().filename().string();
            const geom::FaceImage img = io::load_png(e.path().string());
            CHECK(img.is_valid());
            CHECK(img.width() == cfg.alignment.output_size);
            if (name.find("_morph.png") != std::string::npos) ++proposed;
            if (name.find("_baseline.png") != std::string::npos) ++baseline;
        }
        CHECK(proposed == 4);
        CHECK(baseline == 4);
    }
    SUBCASE("vulnerability report agrees with its own emitted scores") {
        std::ifstream jf(paths.reports_dir() + "/vulnerability.json");
        const auto j = nlohmann::json::parse(jf);
        const double tau = j.at("tau").get<double>();
        const double reported = j.at("mmpmr").get<double>();
        CHECK(reported >= 0.0);
        CHECK(reported <= 1.0);

        // recompute the per-morph minimum from scores.csv
        std::ifstream sf(paths.reports_dir() + "/scores.csv");
        std::string line;
        std::getline(sf, line);
        CHECK(line == "morph_id,subject_id,score");
        std::map<std::string, double> mins;
        while (std::getline(sf, line)) {
            if (line.empty()) continue;
            std::stringstream ss(line);
            std::string id, subj, score;
            std::getline(ss, id, ',');
            std::getline(ss, subj, ',');
            std::getline(ss, score);
            const double v = std::stod(score);
            mins.count(id) ? mins[id] = std::min(mins[id], v) : mins[id] = v;
        }
        std::vector<double> min_scores;
        for (const auto& [id, v] : mins) min_scores.push_back(v);
        CHECK(eval::mmpmr_from_min_scores(min_scores, tau) == doctest::Approx(reported));
    }
    SUBCASE("quality means match direct recomputation from the artifacts") {
        std::ifstream jf(paths.reports_dir() + "/quality.json");
        const auto j = nlohmann::json::parse(jf);
        double psnr_sum = 0.0, ssim_sum = 0.0;
        int n = 0;
        for (const auto& entry : j.at("entries")) {
            const std::string id = entry.at("morph_id").get<std::string>();
            // recompute against the aligned parents
            const auto protocol = load_protocol(cfg.protocol_path());
            for (const auto& pp : protocol) {
                if (pp.pair_id != id) continue;
                const std::string sa = subject_id_of(pp.img_a);
                const std::string sb = subject_id_of(pp.img_b);
                const geom::FaceImage morph = io::load_png(paths.morph_image(sa, sb));
                const geom::FaceImage pa = io::load_png(paths.aligned_image(sa));
                const geom::FaceImage pb = io::load_png(paths.aligned_image(sb));
                const auto q = eval::morph_quality(morph, pa, pb, id);
                CHECK(entry.at("psnr").get<double>() == doctest::Approx(q.psnr_avg).epsilon(1e-9));
                CHECK(entry.at("ssim").get<double>() == doctest::Approx(q.ssim_avg).epsilon(1e-9));
                psnr_sum += q.psnr_avg;
                ssim_sum += q.ssim_avg;
                ++n;
            }
        }
        CHECK(j.at("psnr_mean").get<double>() == doctest::Approx(psnr_sum / n).epsilon(1e-9));
        CHECK(j.at("ssim_mean").get<double>() == doctest::Approx(ssim_sum / n).epsilon(1e-9));
    }
    SUBCASE("rerunning generate reproduces identical morph digests") {
        const auto before = digest_dir(paths.morphs_dir());
        cmd_generate(cfg);
        const auto after = digest_dir(paths.morphs_dir());
        REQUIRE(before.size() == after.size());
        for (const auto& [rel, hash] : before) CHECK(after.at(rel) == hash);
    }
    SUBCASE("parallel generation matches the sequential digests") {
        RunConfig par = cfg;
        par.workers = 3;
        const auto before = digest_dir(paths.morphs_dir());
        cmd_generate(par);
        const auto after = digest_dir(paths.morphs_dir());
        for (const auto& [rel, hash] : before) CHECK(after.at(rel) == hash);
    }
    SUBCASE("detector-score ingestion emits a det curve") {
        std::ofstream ds(tmp / "det_scores.csv");
        ds << "sample_id,label,score\n";
        for (int i = 0; i < 10; ++i) ds << "a" << i << ",attack," << 0.5 + 0.05 * i << "\n";
        for (int i = 0; i < 10; ++i) ds << "b" << i << ",bonafide," << 0.05 * i << "\n";
        ds.close();
        cmd_evaluate(cfg, tmp / "det_scores.csv");
        CHECK(fs::exists(paths.reports_dir() + "/det.csv"));
        std::ifstream det(paths.reports_dir() + "/det.csv");
        std::string header;
        std::getline(det, header);
        CHECK(header == "threshold,apcer,bpcer");
    }
}

TEST_CASE("end-to-end determinism: identical config + seed, identical digests") {
    testutil::TempDir tmp("repro");
    RunConfig a = tiny_run_config(tmp.str());
    a.run_dir = tmp / "run_a";
    a.data_dir = tmp / "data_a";
    RunConfig b = tiny_run_config(tmp.str());
    b.run_dir = tmp / "run_b";
    b.data_dir = tmp / "data_b";

    run_full_pipeline(a);
    run_full_pipeline(b);

    const auto da = digest_dir(a.run_dir);
    const auto db = digest_dir(b.run_dir);
    REQUIRE(da.size() == db.size());
    for (const auto& [rel, hash] : da) CHECK(db.at(rel) == hash);
}

TEST_CASE("manifest lock guards the run directory") {
    testutil::TempDir tmp("lock");
    const std::string run_dir = tmp / "run";
    ManifestLock lock(run_dir);
    CHECK_THROWS_WITH_AS(ManifestLock{run_dir}, doctest::Contains("locked"), IoError);
}

TEST_CASE("external mock matcher plugin reproduces the toy matcher") {
    // MOCK_MATCHER_PATH points at the built plugin binary
    testutil::TempDir tmp("plugin");
    RunConfig cfg = tiny_run_config(tmp.str());
    run_full_pipeline(cfg);

    std::ifstream toy_file(cfg.run_dir + "/reports/vulnerability.json");
    const auto toy = nlohmann::json::parse(toy_file);

    RunConfig ext = cfg;
    ext.matcher.type = "external";
    ext.matcher.command = std::string(MOCK_MATCHER_PATH) + " --seed 7";
    cmd_evaluate(ext);

    std::ifstream ext_file(cfg.run_dir + "/reports/vulnerability.json");
    const auto j = nlohmann::json::parse(ext_file);
    CHECK(j.at("matcher").get<std::string>().find("external/") == 0);
    // same embeddings through the process boundary: identical tau and MMPMR
    CHECK(j.at("tau").get<double>() == doctest::Approx(toy.at("tau").get<double>()).epsilon(1e-12));
    CHECK(j.at("mmpmr").get<double>() == toy.at("mmpmr").get<double>());
}
