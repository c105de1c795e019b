// morph: end-to-end face-morphing toolkit CLI.
//
// Subcommands: synth | prepare | train-landmarks | train-blender | generate |
// evaluate. All state lives in the run directory; every command is
// deterministic for a fixed config + seed.

#include <cstdio>
#include <exception>
#include <string>

#include <CLI11.hpp>

#include "morphkit/pipeline/commands.hpp"
#include "morphkit/pipeline/manifest.hpp"

namespace {

struct GlobalOpts {
    std::string config_path;
    std::string run_dir;
    std::string data_dir;
    long long seed = -1;
    int workers = 0;
};

morphkit::pipeline::RunConfig resolve_config(const GlobalOpts& opts) {
    morphkit::pipeline::RunConfig cfg;
    if (!opts.config_path.empty()) cfg = morphkit::pipeline::load_run_config(opts.config_path);
    if (opts.seed >= 0) cfg.seed = static_cast<std::uint64_t>(opts.seed);
    if (!opts.run_dir.empty()) cfg.run_dir = opts.run_dir;
    if (!opts.data_dir.empty()) cfg.data_dir = opts.data_dir;
    if (opts.workers > 0) cfg.workers = opts.workers;
    cfg.propagate();
    cfg.validate();
    return cfg;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{std::string(morphkit::pipeline::kToolVersion) +
                 " - optimal-landmark-guided face morphing toolkit"};
    app.require_subcommand(1);

    GlobalOpts opts;
    app.add_option("--config", opts.config_path, "JSON run configuration")->check(CLI::ExistingFile);
    app.add_option("--seed", opts.seed, "override the top-level seed");
    app.add_option("--run-dir", opts.run_dir, "override the run directory");
    app.add_option("--data-dir", opts.data_dir, "override the dataset directory");
    app.add_option("--workers", opts.workers, "parallel workers for per-pair generation");

    auto* synth = app.add_subcommand("synth", "generate the synthetic desk-scale dataset");
    auto* prepare = app.add_subcommand(
        "prepare", "align faces and landmarks, build supervisors and baseline morphs");
    auto* train_lm = app.add_subcommand("train-landmarks", "train the landmark blending module");
    auto* train_ib = app.add_subcommand("train-blender", "train the image blending module");
    auto* generate = app.add_subcommand("generate", "generate proposed and baseline morphs");
    auto* evaluate = app.add_subcommand("evaluate", "vulnerability and quality reports");

    bool resume_lm = false, resume_ib = false;
    train_lm->add_flag("--resume", resume_lm, "continue from the existing checkpoint");
    train_ib->add_flag("--resume", resume_ib, "continue from the existing checkpoint");

    std::string detector_scores;
    evaluate->add_option("--detector-scores", detector_scores,
                         "MAD detector scores CSV (sample_id,label,score) for DET output");

    CLI11_PARSE(app, argc, argv);

    try {
        const auto cfg = resolve_config(opts);
        if (synth->parsed()) {
            morphkit::pipeline::cmd_synth(cfg);
            std::printf("synth: %d subjects at %dpx -> %s\n", cfg.synth.count,
                        cfg.synth.resolution, cfg.data_dir.c_str());
        }
        if (prepare->parsed()) {
            morphkit::pipeline::cmd_prepare(cfg);
            std::printf("prepare: aligned crops, supervisors and baselines -> %s\n",
                        cfg.run_dir.c_str());
        }
        if (train_lm->parsed()) {
            morphkit::pipeline::cmd_train_landmarks(cfg, resume_lm);
            std::printf("train-landmarks: %d steps -> %s/checkpoints\n",
                        cfg.landmark_blender.steps, cfg.run_dir.c_str());
        }
        if (train_ib->parsed()) {
            morphkit::pipeline::cmd_train_blender(cfg, resume_ib);
            std::printf("train-blender: %d steps (%s discriminators) -> %s/checkpoints\n",
                        cfg.image_blender.steps,
                        morphkit::gib::to_string(cfg.image_blender.mode).c_str(),
                        cfg.run_dir.c_str());
        }
        if (generate->parsed()) {
            morphkit::pipeline::cmd_generate(cfg);
            std::printf("generate: proposed + baseline morphs -> %s/morphs\n",
                        cfg.run_dir.c_str());
        }
        if (evaluate->parsed()) {
            morphkit::pipeline::cmd_evaluate(cfg, detector_scores);
            std::printf("evaluate: reports -> %s/reports\n", cfg.run_dir.c_str());
        }
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
